#include "amdn/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace amdn {

using nlohmann::json;

namespace {
constexpr double kLnEps = 1e-5;

// splitmix64, for deriving independent stream seeds
std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct TensorRef {
    std::string name;
    double* data;
    std::ptrdiff_t size;
    bool weight_decay;
};

std::vector<TensorRef> collect(ModelParams& p) {
    std::vector<TensorRef> refs;
    p.visit([&](const std::string& name, double* data, std::ptrdiff_t size, bool wd) {
        refs.push_back({name, data, size, wd});
    });
    return refs;
}
}  // namespace

void ModelParams::visit(const std::function<void(const std::string&, double*, std::ptrdiff_t,
                                                 bool)>& fn) {
    auto mat = [&](const char* name, Matrix& m, bool wd) { fn(name, m.data(), m.size(), wd); };
    auto vec = [&](const char* name, Vector& v, bool wd) { fn(name, v.data(), v.size(), wd); };
    mat("W_e", enc.W_e, true);
    mat("W_q", enc.W_q, true);
    mat("W_k", enc.W_k, true);
    mat("W_v", enc.W_v, true);
    vec("ln_gain", enc.ln_gain, false);
    vec("ln_bias", enc.ln_bias, false);
    mat("W_ff", enc.W_ff, true);
    vec("b_ff", enc.b_ff, false);
    mat("temporal_coeff", enc.temporal_coeff, false);
    if (cfg.summarizer == Summarizer::Recurrent) {
        mat("W_r", enc.W_r, true);
        mat("U_r", enc.U_r, true);
        vec("b_r", enc.b_r, false);
    }
    mat("V_w", head.V_w, true);
    mat("V_s", head.V_s, true);
    mat("V_mu", head.V_mu, true);
    vec("b_w", head.b_w, false);
    vec("b_s", head.b_s, false);
    vec("b_mu", head.b_mu, false);
    mat("type_W1", head.W1, true);
    vec("type_b1", head.b1, false);
    mat("type_W2", head.W2, true);
    vec("type_b2", head.b2, false);
}

void ModelParams::visit(const std::function<void(const std::string&, const double*, std::ptrdiff_t,
                                                 bool)>& fn) const {
    const_cast<ModelParams*>(this)->visit(
        [&](const std::string& n, double* d, std::ptrdiff_t s, bool wd) { fn(n, d, s, wd); });
}

std::ptrdiff_t ModelParams::num_params() const {
    std::ptrdiff_t n = 0;
    visit([&](const std::string&, const double*, std::ptrdiff_t size, bool) { n += size; });
    return n;
}

Vector ModelParams::flatten() const {
    Vector flat(num_params());
    std::ptrdiff_t off = 0;
    visit([&](const std::string&, const double* data, std::ptrdiff_t size, bool) {
        std::copy(data, data + size, flat.data() + off);
        off += size;
    });
    return flat;
}

void ModelParams::unflatten(const Vector& flat) {
    if (flat.size() != num_params()) throw std::invalid_argument("unflatten: size mismatch");
    std::ptrdiff_t off = 0;
    visit([&](const std::string&, double* data, std::ptrdiff_t size, bool) {
        std::copy(flat.data() + off, flat.data() + off + size, data);
        off += size;
    });
}

ModelParams ModelParams::zeros_like() const {
    ModelParams z = *this;
    z.visit([](const std::string&, double* data, std::ptrdiff_t size, bool) {
        std::fill(data, data + size, 0.0);
    });
    return z;
}

static void allocate_params(ModelParams& p) {
    const ModelConfig& c = p.cfg;
    const int d = c.d();
    p.enc.W_e = Matrix::Zero(c.vocab_size, c.m_e);
    p.enc.W_q = Matrix::Zero(d, d);
    p.enc.W_k = Matrix::Zero(d, d);
    p.enc.W_v = Matrix::Zero(d, d);
    p.enc.ln_gain = Vector::Ones(d);
    p.enc.ln_bias = Vector::Zero(d);
    p.enc.W_ff = Matrix::Zero(d, d);
    p.enc.b_ff = Vector::Zero(d);
    p.enc.temporal_coeff = Matrix::Zero(c.num_freqs, c.m_t);
    p.enc.freqs = Vector::Ones(c.num_freqs);
    if (c.summarizer == Summarizer::Recurrent) {
        p.enc.W_r = Matrix::Zero(d, d);
        p.enc.U_r = Matrix::Zero(d, d);
        p.enc.b_r = Vector::Zero(d);
    }
    p.head.V_w = Matrix::Zero(d, c.K);
    p.head.V_s = Matrix::Zero(d, c.K);
    p.head.V_mu = Matrix::Zero(d, c.K);
    p.head.b_w = Vector::Zero(c.K);
    p.head.b_s = Vector::Zero(c.K);
    p.head.b_mu = Vector::Zero(c.K);
    p.head.W1 = Matrix::Zero(d, c.type_hidden);
    p.head.b1 = Vector::Zero(c.type_hidden);
    p.head.W2 = Matrix::Zero(c.type_hidden, c.vocab_size);
    p.head.b2 = Vector::Zero(c.vocab_size);
}

ModelParams init_model(const ModelConfig& cfg, const std::vector<IndexedSequence>& train_data,
                       std::uint64_t seed) {
    ModelParams p;
    p.cfg = cfg;
    allocate_params(p);

    // data statistics: mean inter-event time and frequency grid
    double tau_sum = 0.0;
    std::size_t tau_n = 0;
    double dt_min = std::numeric_limits<double>::infinity();
    double dt_max = 0.0;
    for (const auto& s : train_data) {
        for (std::size_t i = 1; i < s.size(); ++i) {
            double dt = s.times[i] - s.times[i - 1];
            tau_sum += std::max(dt, cfg.tau_eps);
            tau_n++;
            if (dt > 0 && dt < dt_min) dt_min = dt;
            if (dt > dt_max) dt_max = dt;
        }
    }
    p.tau_mean = tau_n > 0 ? tau_sum / tau_n : 1.0;
    double lo = std::isfinite(dt_min) ? dt_min : 1.0;
    double hi = dt_max > lo ? dt_max : lo * 10.0;
    for (int f = 0; f < cfg.num_freqs; ++f) {
        double frac = cfg.num_freqs > 1 ? static_cast<double>(f) / (cfg.num_freqs - 1) : 0.0;
        p.enc.freqs[f] = lo * std::pow(hi / lo, frac);
    }

    std::mt19937_64 rng(seed);
    auto fill_uniform = [&](Matrix& m, int fan_in) {
        std::uniform_real_distribution<double> u(-1.0 / std::sqrt(static_cast<double>(fan_in)),
                                                 1.0 / std::sqrt(static_cast<double>(fan_in)));
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = u(rng);
    };
    const int d = cfg.d();
    fill_uniform(p.enc.W_e, cfg.m_e);
    fill_uniform(p.enc.W_q, d);
    fill_uniform(p.enc.W_k, d);
    fill_uniform(p.enc.W_v, d);
    fill_uniform(p.enc.W_ff, d);
    if (cfg.summarizer == Summarizer::Recurrent) {
        fill_uniform(p.enc.W_r, d);
        fill_uniform(p.enc.U_r, d);
    }
    fill_uniform(p.head.V_w, d);
    fill_uniform(p.head.V_s, d);
    fill_uniform(p.head.V_mu, d);
    fill_uniform(p.head.W1, d);
    fill_uniform(p.head.W2, cfg.type_hidden);
    p.enc.temporal_coeff.setConstant(1.0 / std::sqrt(static_cast<double>(cfg.m_t)));
    return p;
}

namespace {

// Backward pass for one sequence; seeds come from the density/type heads,
// everything else is standard chain rule through the forward caches.
void backward_sequence(const IndexedSequence& seq, const ModelParams& p, const EncodeCache& cache,
                       double scale, ModelParams& g) {
    const ModelConfig& cfg = p.cfg;
    const int L = static_cast<int>(seq.size());
    const int d = cfg.d();
    Matrix dC = Matrix::Zero(L, d);

    for (int i = 1; i < L; ++i) {
        Vector c = cache.contexts.row(i - 1).transpose();

        // mixture head forward (cheap; recomputed rather than cached)
        Vector aw = p.head.V_w.transpose() * c + p.head.b_w;
        Vector as_raw = p.head.V_s.transpose() * c + p.head.b_s;
        Vector mu = p.head.V_mu.transpose() * c + p.head.b_mu;
        double m = aw.maxCoeff();
        Vector w = (aw.array() - m).exp();
        w /= w.sum();
        Vector as = as_raw.array().min(cfg.log_scale_clamp).max(-cfg.log_scale_clamp);
        Vector s = as.array().exp();

        double tau = std::max(seq.times[i] - seq.times[i - 1], cfg.tau_eps);
        double x = std::log(tau / p.tau_mean);

        Vector z = (x - mu.array()) / s.array();
        Vector l = w.array().log() - as.array() - 0.5 * z.array().square();
        double lm = l.maxCoeff();
        Vector pk = (l.array() - lm).exp();
        pk /= pk.sum();

        // time NLL = -logsumexp(l) + const  =>  d/dl_k = -p_k
        Vector dl = -pk * scale;
        double dl_sum = dl.sum();
        Vector daw = dl.array() - w.array() * dl_sum;
        Vector dmu = dl.array() * z.array() / s.array();
        Vector das = dl.array() * (-1.0 + z.array().square());
        for (int k = 0; k < cfg.K; ++k)
            if (as_raw[k] < -cfg.log_scale_clamp || as_raw[k] > cfg.log_scale_clamp) das[k] = 0.0;

        g.head.V_w.noalias() += c * daw.transpose();
        g.head.V_s.noalias() += c * das.transpose();
        g.head.V_mu.noalias() += c * dmu.transpose();
        g.head.b_w += daw;
        g.head.b_s += das;
        g.head.b_mu += dmu;
        Vector dc = p.head.V_w * daw + p.head.V_s * das + p.head.V_mu * dmu;

        // type head: cross entropy
        Vector h1 = (p.head.W1.transpose() * c + p.head.b1).array().tanh();
        Vector logits = p.head.W2.transpose() * h1 + p.head.b2;
        double lmax = logits.maxCoeff();
        Vector q = (logits.array() - lmax).exp();
        q /= q.sum();
        Vector dlogit = q * scale;
        dlogit[seq.accounts[i]] -= scale;
        g.head.W2.noalias() += h1 * dlogit.transpose();
        g.head.b2 += dlogit;
        Vector dh1 = p.head.W2 * dlogit;
        Vector dpre = dh1.array() * (1.0 - h1.array().square());
        g.head.W1.noalias() += c * dpre.transpose();
        g.head.b1 += dpre;
        dc += p.head.W1 * dpre;

        dC.row(i - 1) += dc.transpose();
    }

    // summarizer
    Matrix dH_out;
    if (cfg.summarizer == Summarizer::Identity) {
        dH_out = std::move(dC);
    } else {
        dH_out = Matrix::Zero(L, d);
        Eigen::RowVectorXd carry = Eigen::RowVectorXd::Zero(d);
        for (int i = L - 1; i >= 0; --i) {
            Eigen::RowVectorXd dci = dC.row(i) + carry;
            Eigen::RowVectorXd da =
                dci.array() * (1.0 - cache.contexts.row(i).array().square());
            g.enc.W_r.noalias() += cache.H_out.row(i).transpose() * da;
            if (i > 0) g.enc.U_r.noalias() += cache.contexts.row(i - 1).transpose() * da;
            g.enc.b_r += da.transpose();
            dH_out.row(i) = da * p.enc.W_r.transpose();
            carry = da * p.enc.U_r.transpose();
        }
    }

    // feed-forward (tanh)
    Matrix dF = dH_out.array() * (1.0 - cache.H_out.array().square());
    g.enc.W_ff.noalias() += cache.ff_in.transpose() * dF;
    g.enc.b_ff += dF.colwise().sum().transpose();
    Matrix dy = dF * p.enc.W_ff.transpose();

    if (cache.drop_mask.size() > 0) dy = dy.cwiseProduct(cache.drop_mask);

    // layer norm
    Matrix dH_attn(L, d);
    for (int i = 0; i < L; ++i) {
        Eigen::RowVectorXd dyi = dy.row(i);
        Eigen::RowVectorXd norm = cache.ln_norm.row(i);
        g.enc.ln_gain += (dyi.array() * norm.array()).matrix().transpose();
        g.enc.ln_bias += dyi.transpose();
        Eigen::RowVectorXd dnorm = dyi.array() * p.enc.ln_gain.transpose().array();
        double mean_dnorm = dnorm.mean();
        double mean_dnorm_norm = (dnorm.array() * norm.array()).mean();
        dH_attn.row(i) =
            cache.ln_inv_std[i] * (dnorm.array() - mean_dnorm - norm.array() * mean_dnorm_norm);
    }

    // attention
    Matrix dA = dH_attn * cache.V.transpose();
    Matrix dV = cache.A.transpose() * dH_attn;
    Matrix dS = Matrix::Zero(L, L);
    for (int i = 0; i < L; ++i) {
        double dot = 0.0;
        for (int j = 0; j <= i; ++j) dot += dA(i, j) * cache.A(i, j);
        for (int j = 0; j <= i; ++j) dS(i, j) = cache.A(i, j) * (dA(i, j) - dot);
    }
    double scale_attn = 1.0 / std::sqrt(static_cast<double>(d));
    Matrix dQ = dS * cache.K * scale_attn;
    Matrix dK = dS.transpose() * cache.Q * scale_attn;
    g.enc.W_q.noalias() += cache.X.transpose() * dQ;
    g.enc.W_k.noalias() += cache.X.transpose() * dK;
    g.enc.W_v.noalias() += cache.X.transpose() * dV;
    Matrix dX = dQ * p.enc.W_q.transpose() + dK * p.enc.W_k.transpose() + dV * p.enc.W_v.transpose();

    // input embedding splits
    const int off_t = cfg.m_e + cfg.m_p;
    for (int i = 0; i < L; ++i) {
        g.enc.W_e.row(seq.accounts[i]) += dX.row(i).segment(0, cfg.m_e);
        const Matrix& basis = cache.temporal_basis[i];
        if (cfg.temporal_combine == TemporalCombine::Sum) {
            for (int f = 0; f < cfg.num_freqs; ++f)
                for (int mdim = 0; mdim < cfg.m_t; ++mdim)
                    g.enc.temporal_coeff(f, mdim) += dX(i, off_t + mdim) * basis(f, mdim);
        } else {
            for (int f = 0; f < cfg.num_freqs; ++f)
                for (int mdim = 0; mdim < cfg.m_t; ++mdim)
                    g.enc.temporal_coeff(f, mdim) += dX(i, off_t + f * cfg.m_t + mdim) * basis(f, mdim);
        }
    }
}

}  // namespace

LossResult loss_and_gradients(const std::vector<IndexedSequence>& batch, const ModelParams& params,
                              bool train_mode, std::uint64_t dropout_seed, double l2_penalty) {
    if (batch.empty()) throw std::invalid_argument("loss_and_gradients: empty batch");

    std::size_t n_pred = 0;
    for (const auto& s : batch) {
        if (s.size() < 2) throw std::invalid_argument("loss_and_gradients: sequence shorter than 2");
        n_pred += s.size() - 1;
    }
    double scale = 1.0 / static_cast<double>(n_pred);

    LossResult res;
    res.grads = params.zeros_like();
    double total = 0.0;
    for (std::size_t si = 0; si < batch.size(); ++si) {
        const auto& seq = batch[si];
        EncodeCache cache;
        EncodedSequence enc =
            encode(seq, params.enc, params.cfg, train_mode, mix_seed(dropout_seed + si), &cache);
        NllBreakdown nll = sequence_nll(seq, enc, params.head, params.cfg, params.tau_mean);
        if (!std::isfinite(nll.total))
            throw std::runtime_error("loss_and_gradients: non-finite loss on sequence '" + seq.id + "'");
        total += nll.total;
        backward_sequence(seq, params, cache, scale, res.grads);
    }
    res.loss = total * scale;

    if (l2_penalty > 0.0) {
        auto prefs = collect(const_cast<ModelParams&>(params));
        auto grefs = collect(res.grads);
        for (std::size_t t = 0; t < prefs.size(); ++t) {
            if (!prefs[t].weight_decay) continue;
            for (std::ptrdiff_t i = 0; i < prefs[t].size; ++i) {
                res.loss += 0.5 * l2_penalty * prefs[t].data[i] * prefs[t].data[i];
                grefs[t].data[i] += l2_penalty * prefs[t].data[i];
            }
        }
    }
    return res;
}

OptimizerState make_optimizer(const ModelParams& params, double lr, double weight_decay) {
    OptimizerState st;
    st.m = Vector::Zero(params.num_params());
    st.v = Vector::Zero(params.num_params());
    st.learning_rate = lr;
    st.weight_decay = weight_decay;
    return st;
}

void adam_step(ModelParams& params, const ModelParams& grads, OptimizerState& state) {
    auto prefs = collect(params);
    auto grefs = collect(const_cast<ModelParams&>(grads));
    if (prefs.size() != grefs.size()) throw std::invalid_argument("adam_step: shape mismatch");

    state.step++;
    double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));

    std::ptrdiff_t off = 0;
    for (std::size_t t = 0; t < prefs.size(); ++t) {
        if (prefs[t].size != grefs[t].size) throw std::invalid_argument("adam_step: tensor size mismatch");
        for (std::ptrdiff_t i = 0; i < prefs[t].size; ++i, ++off) {
            double gi = grefs[t].data[i];
            state.m[off] = state.beta1 * state.m[off] + (1.0 - state.beta1) * gi;
            state.v[off] = state.beta2 * state.v[off] + (1.0 - state.beta2) * gi * gi;
            double update = state.learning_rate * (state.m[off] / bc1) /
                            (std::sqrt(state.v[off] / bc2) + state.eps);
            prefs[t].data[i] -= update;
            if (prefs[t].weight_decay)
                prefs[t].data[i] -= state.learning_rate * state.weight_decay * prefs[t].data[i];
        }
    }
}

EvalMetrics evaluate(const std::vector<IndexedSequence>& data, const ModelParams& params) {
    if (data.empty()) throw std::invalid_argument("evaluate: empty data");
    double time_nll = 0.0, type_nll = 0.0;
    std::size_t correct = 0, predicted = 0;
    for (const auto& seq : data) {
        EncodedSequence enc = encode(seq, params.enc, params.cfg, /*train_mode=*/false);
        NllBreakdown nll = sequence_nll(seq, enc, params.head, params.cfg, params.tau_mean);
        time_nll += nll.time;
        type_nll += nll.type;
        correct += nll.type_correct;
        predicted += nll.predicted;
    }
    EvalMetrics m;
    m.event_time_nll = time_nll / predicted;
    m.event_type_nll = type_nll / predicted;
    m.nll = m.event_time_nll + m.event_type_nll;
    m.event_type_accuracy = static_cast<double>(correct) / predicted;
    return m;
}

TrainResult train(const IndexedSplit& data, const TrainConfig& config) {
    if (data.train.empty() || data.validation.empty())
        throw std::invalid_argument("train: train and validation splits must be non-empty");

    ModelParams params = init_model(config.model, data.train, config.seed);
    OptimizerState opt = make_optimizer(params, config.learning_rate,
                                        config.l2_in_loss ? 0.0 : config.weight_decay);

    TrainResult result;
    result.best_val_nll = std::numeric_limits<double>::infinity();

    std::mt19937_64 shuffle_rng(mix_seed(config.seed ^ 0x5d1f00dULL));
    std::vector<std::size_t> order(data.train.size());
    std::iota(order.begin(), order.end(), 0);

    int since_best = 0;
    auto t0 = std::chrono::steady_clock::now();
    for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        double epoch_nll = 0.0;
        std::size_t epoch_pred = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            std::size_t end = std::min(order.size(), start + config.batch_size);
            std::vector<IndexedSequence> batch;
            batch.reserve(end - start);
            std::size_t batch_pred = 0;
            for (std::size_t k = start; k < end; ++k) {
                batch.push_back(data.train[order[k]]);
                batch_pred += batch.back().size() - 1;
            }
            std::uint64_t drop_seed = mix_seed(config.seed + 7919 * (epoch + 1) + start);
            LossResult lr = loss_and_gradients(batch, params, /*train_mode=*/true, drop_seed,
                                               config.l2_in_loss ? config.weight_decay : 0.0);
            adam_step(params, lr.grads, opt);
            epoch_nll += lr.loss * batch_pred;
            epoch_pred += batch_pred;
        }

        EvalMetrics val = evaluate(data.validation, params);
        if (!std::isfinite(val.nll))
            throw std::runtime_error("train: validation NLL diverged at epoch " + std::to_string(epoch));

        EpochLog log;
        log.epoch = epoch;
        log.train_nll = epoch_nll / epoch_pred;
        log.val_nll = val.nll;
        log.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.log.push_back(log);

        if (val.nll < result.best_val_nll) {
            result.best_val_nll = val.nll;
            result.best_params = params;
            result.best_epoch = epoch;
            since_best = 0;
        } else {
            since_best++;
            if (since_best > config.patience) break;
        }
    }
    return result;
}

// ---- checkpoint ----

namespace {
json config_to_json(const ModelConfig& c) {
    return json{{"vocab_size", c.vocab_size},
                {"m_e", c.m_e},
                {"m_p", c.m_p},
                {"m_t", c.m_t},
                {"num_freqs", c.num_freqs},
                {"K", c.K},
                {"type_hidden", c.type_hidden},
                {"dropout", c.dropout},
                {"log_scale_clamp", c.log_scale_clamp},
                {"tau_eps", c.tau_eps},
                {"summarizer", c.summarizer == Summarizer::Identity ? "identity" : "recurrent"},
                {"temporal_combine", c.temporal_combine == TemporalCombine::Sum ? "sum" : "stack"}};
}

ModelConfig config_from_json(const json& j) {
    ModelConfig c;
    c.vocab_size = j.at("vocab_size");
    c.m_e = j.at("m_e");
    c.m_p = j.at("m_p");
    c.m_t = j.at("m_t");
    c.num_freqs = j.at("num_freqs");
    c.K = j.at("K");
    c.type_hidden = j.at("type_hidden");
    c.dropout = j.at("dropout");
    c.log_scale_clamp = j.at("log_scale_clamp");
    c.tau_eps = j.at("tau_eps");
    c.summarizer =
        j.at("summarizer") == "recurrent" ? Summarizer::Recurrent : Summarizer::Identity;
    c.temporal_combine =
        j.at("temporal_combine") == "stack" ? TemporalCombine::Stack : TemporalCombine::Sum;
    return c;
}
}  // namespace

void save_checkpoint(const std::string& path, const ModelParams& params,
                     const AccountVocabulary& vocab, const OptimizerState* opt, int epoch) {
    json j;
    j["version"] = 1;
    j["config"] = config_to_json(params.cfg);
    j["vocab"] = vocab.ids();
    j["tau_mean"] = params.tau_mean;
    j["freqs"] = std::vector<double>(params.enc.freqs.data(),
                                     params.enc.freqs.data() + params.enc.freqs.size());
    Vector flat = params.flatten();
    j["params"] = std::vector<double>(flat.data(), flat.data() + flat.size());
    j["epoch"] = epoch;
    if (opt) {
        j["optimizer"] = json{
            {"m", std::vector<double>(opt->m.data(), opt->m.data() + opt->m.size())},
            {"v", std::vector<double>(opt->v.data(), opt->v.data() + opt->v.size())},
            {"step", opt->step},
            {"learning_rate", opt->learning_rate},
            {"weight_decay", opt->weight_decay}};
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    out << j.dump() << "\n";
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    json j;
    in >> j;
    if (j.at("version") != 1) throw std::runtime_error("unsupported checkpoint version");

    Checkpoint ck;
    ck.params.cfg = config_from_json(j.at("config"));
    allocate_params(ck.params);
    ck.params.tau_mean = j.at("tau_mean");
    std::vector<double> freqs = j.at("freqs");
    ck.params.enc.freqs = Eigen::Map<Vector>(freqs.data(), freqs.size());
    std::vector<double> flat = j.at("params");
    ck.params.unflatten(Eigen::Map<Vector>(flat.data(), flat.size()));
    for (const auto& id : j.at("vocab")) ck.vocab.add(id.get<std::string>());
    ck.epoch = j.at("epoch");
    if (j.contains("optimizer")) {
        const auto& o = j.at("optimizer");
        std::vector<double> m = o.at("m"), v = o.at("v");
        ck.opt.m = Eigen::Map<Vector>(m.data(), m.size());
        ck.opt.v = Eigen::Map<Vector>(v.data(), v.size());
        ck.opt.step = o.at("step");
        ck.opt.learning_rate = o.at("learning_rate");
        ck.opt.weight_decay = o.at("weight_decay");
        ck.has_opt = true;
    }
    return ck;
}

}  // namespace amdn
