#include "amdn/hawkes.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace amdn {

namespace {

double softplus(double z) { return z > 30.0 ? z : std::log1p(std::exp(z)); }
double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

double HawkesModel::branching_radius() const {
    // power iteration; alpha is non-negative so this converges to the
    // spectral radius
    HVector v = HVector::Ones(alpha.rows()).normalized();
    double lambda = 0.0;
    for (int it = 0; it < 500; ++it) {
        HVector w = alpha * v;
        lambda = w.norm();
        if (lambda == 0.0) return 0.0;
        v = w / lambda;
    }
    return lambda;
}

double intensity(const HawkesModel& model, int account, double t, const IndexedSequence& history) {
    if (account < 0 || account >= model.num_types())
        throw std::invalid_argument("intensity: account index out of range");
    double rate = model.mu[account];
    for (std::size_t j = 0; j < history.size(); ++j) {
        if (history.times[j] >= t)
            throw std::domain_error("intensity: history event not strictly before t");
        rate += model.alpha(account, history.accounts[j]) * model.beta *
                std::exp(-model.beta * (t - history.times[j]));
    }
    return rate;
}

IndexedSequence simulate(const HawkesModel& model, double horizon, std::uint64_t seed,
                         const SimulateOptions& opts) {
    const int U = model.num_types();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    IndexedSequence seq;
    seq.id = "sim" + std::to_string(seed);
    HVector excite = HVector::Zero(U);  // sum_j alpha(i, u_j) beta exp(-beta (t - t_j))
    double t = 0.0;
    while (true) {
        double bound = model.mu.sum() + excite.sum();  // supremum: excitation only decays
        double u1 = unif(rng);
        if (u1 <= 0.0) u1 = std::numeric_limits<double>::min();
        double wait = -std::log(u1) / bound;
        t += wait;
        if (t > horizon) break;
        excite *= std::exp(-model.beta * wait);
        double total = model.mu.sum() + excite.sum();
        if (unif(rng) * bound <= total) {
            // accept; pick the type proportional to its intensity
            double pick = unif(rng) * total;
            int type = U - 1;
            double acc = 0.0;
            for (int i = 0; i < U; ++i) {
                acc += model.mu[i] + excite[i];
                if (pick <= acc) {
                    type = i;
                    break;
                }
            }
            seq.accounts.push_back(type);
            seq.times.push_back(t);
            excite += model.alpha.col(type) * model.beta;
            if (seq.size() > opts.event_cap)
                throw std::runtime_error("simulate: event cap exceeded, process likely unstable");
        }
    }
    return seq;
}

namespace {

// Log-likelihood and (optionally) gradients w.r.t. mu, alpha, beta for one
// sequence; R_b and D_b recursions avoid the quadratic pair sum in beta.
struct SeqLik {
    double loglik = 0.0;
    HVector g_mu;     // |U|
    HMatrix g_alpha;  // |U| x |U|
    double g_beta = 0.0;
};

SeqLik sequence_loglik(const HawkesModel& m, const IndexedSequence& seq, double horizon,
                       bool want_grad) {
    const int U = m.num_types();
    const int L = static_cast<int>(seq.size());
    SeqLik out;
    if (want_grad) {
        out.g_mu = HVector::Zero(U);
        out.g_alpha = HMatrix::Zero(U, U);
    }
    if (L == 0) return out;
    double T = horizon > 0.0 ? horizon : seq.times.back();

    HVector R = HVector::Zero(U);  // sum_{j<i, u_j=b} exp(-beta (t_i - t_j))
    HVector D = HVector::Zero(U);  // sum_{j<i, u_j=b} (t_i - t_j) exp(-beta (t_i - t_j))
    for (int i = 0; i < L; ++i) {
        if (i > 0) {
            double delta = seq.times[i] - seq.times[i - 1];
            double decay = std::exp(-m.beta * delta);
            int prev = seq.accounts[i - 1];
            R[prev] += 1.0;
            D = (D + delta * R) * decay;
            R *= decay;
        }
        int a = seq.accounts[i];
        double excite = m.beta * m.alpha.row(a).dot(R);
        double lam = m.mu[a] + excite;
        out.loglik += std::log(lam);
        if (want_grad) {
            out.g_mu[a] += 1.0 / lam;
            out.g_alpha.row(a) += (m.beta / lam) * R.transpose();
            double dbeta = 0.0;
            for (int b = 0; b < U; ++b) dbeta += m.alpha(a, b) * (R[b] - m.beta * D[b]);
            out.g_beta += dbeta / lam;
        }
    }

    // compensator
    out.loglik -= m.mu.sum() * T;
    HVector comp = HVector::Zero(U);       // per source type: sum_j (1 - exp(-beta (T - t_j)))
    double comp_beta = 0.0;                // sum_j (T - t_j) exp(-beta (T - t_j)) weighted below
    HVector col_alpha = m.alpha.colwise().sum().transpose();
    for (int j = 0; j < L; ++j) {
        double rem = T - seq.times[j];
        double e = std::exp(-m.beta * rem);
        comp[seq.accounts[j]] += 1.0 - e;
        comp_beta += col_alpha[seq.accounts[j]] * rem * e;
    }
    for (int b = 0; b < U; ++b) out.loglik -= col_alpha[b] * comp[b];
    if (want_grad) {
        out.g_mu.array() -= T;
        for (int b = 0; b < U; ++b) out.g_alpha.col(b).array() -= comp[b];
        out.g_beta -= comp_beta;
    }
    return out;
}

}  // namespace

double hawkes_loglik(const HawkesModel& model, const std::vector<IndexedSequence>& data,
                     double horizon) {
    double ll = 0.0;
    for (const auto& s : data) ll += sequence_loglik(model, s, horizon, false).loglik;
    return ll;
}

double hawkes_nll_per_event(const HawkesModel& model, const std::vector<IndexedSequence>& data,
                            double horizon) {
    std::size_t n = 0;
    for (const auto& s : data) n += s.size();
    if (n == 0) throw std::invalid_argument("hawkes_nll_per_event: no events");
    return -hawkes_loglik(model, data, horizon) / static_cast<double>(n);
}

HawkesFitResult fit_hawkes(const std::vector<IndexedSequence>& data, const HawkesFitConfig& config) {
    if (data.empty()) throw std::invalid_argument("fit_hawkes: empty data");
    int U = 0;
    std::size_t n_events = 0;
    double total_time = 0.0;
    for (const auto& s : data) {
        for (int a : s.accounts) U = std::max(U, a + 1);
        n_events += s.size();
        if (!s.times.empty())
            total_time += config.horizon > 0.0 ? config.horizon : s.times.back();
    }
    const int r = config.rank;

    // packed parameters: log_mu, src, tgt, log_beta, alpha_offset
    const int n_params = U + 2 * U * r + 2;
    HVector theta(n_params);
    {
        // empirical per-type rates; embeddings small so alpha starts near 0
        HVector counts = HVector::Zero(U);
        for (const auto& s : data)
            for (int a : s.accounts) counts[a] += 1.0;
        std::mt19937_64 rng(mix_seed(config.seed));
        std::uniform_real_distribution<double> u(-0.3 / std::sqrt(static_cast<double>(r)),
                                                 0.3 / std::sqrt(static_cast<double>(r)));
        for (int i = 0; i < U; ++i)
            theta[i] = std::log(std::max(counts[i], 0.5) / std::max(total_time, 1.0));
        for (int i = U; i < U + 2 * U * r; ++i) theta[i] = u(rng);
        theta[n_params - 2] = 0.0;   // log beta
        theta[n_params - 1] = -3.0;  // alpha offset
    }

    auto unpack = [&](const HVector& th) {
        HawkesModel m;
        m.mu = th.head(U).array().exp();
        m.src_embed = Eigen::Map<const HMatrix>(th.data() + U, U, r);
        m.tgt_embed = Eigen::Map<const HMatrix>(th.data() + U + U * r, U, r);
        m.beta = std::exp(th[n_params - 2]);
        HMatrix Z = (m.src_embed * m.tgt_embed.transpose()).array() + th[n_params - 1];
        m.alpha = Z.unaryExpr([](double z) { return softplus(z); });
        return std::pair<HawkesModel, HMatrix>(std::move(m), std::move(Z));
    };

    auto eval = [&](const HVector& th, HVector* grad) {
        auto [m, Z] = unpack(th);
        double ll = 0.0;
        HVector g_mu = HVector::Zero(U);
        HMatrix g_alpha = HMatrix::Zero(U, U);
        double g_beta = 0.0;
        for (const auto& s : data) {
            SeqLik sl = sequence_loglik(m, s, config.horizon, grad != nullptr);
            ll += sl.loglik;
            if (grad) {
                g_mu += sl.g_mu;
                g_alpha += sl.g_alpha;
                g_beta += sl.g_beta;
            }
        }
        if (grad) {
            grad->setZero(n_params);
            grad->head(U) = g_mu.array() * m.mu.array();  // chain through log-mu
            HMatrix S = g_alpha.cwiseProduct(Z.unaryExpr([](double z) { return sigmoid(z); }));
            Eigen::Map<HMatrix>(grad->data() + U, U, r) = S * m.tgt_embed;
            Eigen::Map<HMatrix>(grad->data() + U + U * r, U, r) = S.transpose() * m.src_embed;
            (*grad)[n_params - 2] = g_beta * m.beta;
            (*grad)[n_params - 1] = S.sum();
        }
        return ll;
    };

    // monotone ascent: RMS-scaled direction with backtracking line search
    HawkesFitResult result;
    HVector grad(n_params), rms = HVector::Zero(n_params);
    double ll = eval(theta, &grad);
    result.loglik_path.push_back(ll);
    double step = config.init_step;
    for (int it = 0; it < config.max_iters; ++it) {
        rms = 0.9 * rms + 0.1 * grad.cwiseProduct(grad);
        HVector dir = grad.array() / (rms.array().sqrt() + 1e-8);
        double trial = step;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            HVector cand = theta + trial * dir;
            double ll_cand = eval(cand, nullptr);
            if (std::isfinite(ll_cand) && ll_cand >= ll) {
                theta = cand;
                ll = ll_cand;
                step = trial * 1.2;
                accepted = true;
                break;
            }
            trial *= 0.5;
        }
        if (!accepted) break;
        double prev = result.loglik_path.back();
        result.loglik_path.push_back(ll);
        eval(theta, &grad);
        if (!std::isfinite(ll)) throw std::runtime_error("fit_hawkes: likelihood diverged");
        if (std::abs(ll - prev) < config.tol * (std::abs(prev) + 1.0) && it > 20) break;
    }
    result.model = unpack(theta).first;
    return result;
}

Scenario make_scenario(const ScenarioConfig& config, std::uint64_t seed) {
    if (config.group_size > config.num_accounts)
        throw std::invalid_argument("make_scenario: group larger than account set");
    const int U = config.num_accounts;
    const int G = config.group_size;

    Scenario sc;
    sc.model.beta = config.beta;
    sc.model.alpha = HMatrix::Constant(U, U, config.background_excitation);
    for (int i = 0; i < G; ++i) {
        for (int j = 0; j < U; ++j) {
            // group members excite each other strongly and ignore outsiders
            sc.model.alpha(i, j) = j < G ? config.intra_excitation : config.outsider_to_group;
        }
    }
    std::mt19937_64 rng(mix_seed(seed));
    std::uniform_real_distribution<double> base(config.base_rate_min, config.base_rate_max);
    sc.model.mu = HVector::Zero(U);
    for (int i = 0; i < U; ++i) sc.model.mu[i] = base(rng);

    double radius = sc.model.branching_radius();
    if (radius >= 0.95)
        throw std::runtime_error("make_scenario: excitation matrix unstable (spectral radius " +
                                 std::to_string(radius) + ")");

    sc.labels.assign(U, 0);
    for (int i = 0; i < G; ++i) sc.labels[i] = 1;

    for (int s = 0; s < config.num_sequences; ++s) {
        IndexedSequence sim = simulate(sc.model, config.horizon, mix_seed(seed ^ (0xABCD + s)));
        EventSequence es;
        es.id = "s" + std::to_string(s);
        for (std::size_t k = 0; k < sim.size(); ++k)
            es.events.push_back(Event{"u" + std::to_string(sim.accounts[k]), sim.times[k]});
        sc.sequences.push_back(std::move(es));
    }
    return sc;
}

}  // namespace amdn
