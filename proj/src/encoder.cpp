#include "amdn/encoder.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace amdn {

namespace {
constexpr double kLnEps = 1e-5;
}

Vector positional_encoding(int pos, int m_p) {
    if (pos < 0) throw std::invalid_argument("positional_encoding: pos must be >= 0");
    if (m_p % 2 != 0) throw std::invalid_argument("positional_encoding: m_p must be even");
    Vector pe(m_p);
    for (int j = 0; 2 * j < m_p; ++j) {
        double angle = pos / std::pow(10000.0, 2.0 * j / m_p);
        pe[2 * j] = std::sin(angle);
        pe[2 * j + 1] = std::cos(angle);
    }
    return pe;
}

// Basis value for slot s at gap dt under frequency omega: slot 0 is the
// constant, then alternating cos/sin of harmonics j*pi*dt/omega.
static Matrix temporal_basis(double dt, const Vector& freqs, int m_t) {
    Matrix B(freqs.size(), m_t);
    for (int f = 0; f < freqs.size(); ++f) {
        for (int s = 0; s < m_t; ++s) {
            if (s == 0) {
                B(f, s) = 1.0;
            } else {
                int j = (s + 1) / 2;
                double angle = j * M_PI * dt / freqs[f];
                B(f, s) = (s % 2 == 1) ? std::cos(angle) : std::sin(angle);
            }
        }
    }
    return B;
}

static Vector temporal_features(const Matrix& basis, const EncoderParams& params,
                                const ModelConfig& cfg) {
    if (cfg.temporal_combine == TemporalCombine::Sum) {
        return (params.temporal_coeff.array() * basis.array()).colwise().sum().transpose();
    }
    Vector out(cfg.m_t * cfg.num_freqs);
    for (int f = 0; f < cfg.num_freqs; ++f)
        out.segment(f * cfg.m_t, cfg.m_t) =
            (params.temporal_coeff.row(f).array() * basis.row(f).array()).transpose();
    return out;
}

Vector temporal_encoding(double delta_t, const EncoderParams& params, const ModelConfig& cfg) {
    if (delta_t < 0) throw std::invalid_argument("temporal_encoding: delta_t must be >= 0");
    return temporal_features(temporal_basis(delta_t, params.freqs, cfg.m_t), params, cfg);
}

Matrix embed_sequence(const IndexedSequence& seq, const EncoderParams& params,
                      const ModelConfig& cfg, EncodeCache* cache) {
    const int L = static_cast<int>(seq.size());
    const int d = cfg.d();
    Matrix X(L, d);
    if (cache) {
        cache->dts.assign(L, 0.0);
        cache->temporal_basis.resize(L);
    }
    for (int i = 0; i < L; ++i) {
        int u = seq.accounts[i];
        if (u < 0 || u >= cfg.vocab_size)
            throw std::runtime_error("embed_sequence: account index out of vocabulary range");
        double dt = i == 0 ? 0.0 : seq.times[i] - seq.times[i - 1];
        Matrix basis = temporal_basis(dt, params.freqs, cfg.m_t);
        X.row(i).segment(0, cfg.m_e) = params.W_e.row(u);
        X.row(i).segment(cfg.m_e, cfg.m_p) = positional_encoding(i, cfg.m_p).transpose();
        X.row(i).segment(cfg.m_e + cfg.m_p, cfg.temporal_dim()) =
            temporal_features(basis, params, cfg).transpose();
        if (cache) {
            cache->dts[i] = dt;
            cache->temporal_basis[i] = std::move(basis);
        }
    }
    if (cache) cache->X = X;
    return X;
}

EncodedSequence masked_self_attention(const Matrix& X, const EncoderParams& params,
                                      const ModelConfig& cfg, bool train_mode,
                                      std::uint64_t dropout_seed, EncodeCache* cache) {
    if (!X.allFinite()) throw std::runtime_error("masked_self_attention: non-finite input X");
    const int L = static_cast<int>(X.rows());
    const int d = cfg.d();

    Matrix Q = X * params.W_q;
    Matrix K = X * params.W_k;
    Matrix V = X * params.W_v;
    double scale = 1.0 / std::sqrt(static_cast<double>(d));

    Matrix A = Matrix::Zero(L, L);
    for (int i = 0; i < L; ++i) {
        // causal: attend to 0..i, self included
        Eigen::RowVectorXd logits = (Q.row(i) * K.transpose()).leftCols(i + 1) * scale;
        double m = logits.maxCoeff();
        Eigen::RowVectorXd e = (logits.array() - m).exp();
        A.row(i).leftCols(i + 1) = e / e.sum();
    }
    Matrix H_attn = A * V;
    if (!H_attn.allFinite()) throw std::runtime_error("masked_self_attention: non-finite attention output");

    // layer norm per row
    Matrix ln_norm(L, d), ln_out(L, d);
    Vector ln_mean(L), ln_inv_std(L);
    for (int i = 0; i < L; ++i) {
        double mean = H_attn.row(i).mean();
        double var = (H_attn.row(i).array() - mean).square().mean();
        double inv_std = 1.0 / std::sqrt(var + kLnEps);
        ln_mean[i] = mean;
        ln_inv_std[i] = inv_std;
        ln_norm.row(i) = (H_attn.row(i).array() - mean) * inv_std;
        ln_out.row(i) =
            ln_norm.row(i).array() * params.ln_gain.transpose().array() + params.ln_bias.transpose().array();
    }
    if (!ln_out.allFinite()) throw std::runtime_error("masked_self_attention: non-finite layer-norm output");

    Matrix drop_mask;
    if (train_mode && cfg.dropout > 0.0) {
        std::mt19937_64 rng(dropout_seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        drop_mask = Matrix(L, d);
        double keep = 1.0 - cfg.dropout;
        for (int i = 0; i < L; ++i)
            for (int j = 0; j < d; ++j) drop_mask(i, j) = unif(rng) < keep ? 1.0 / keep : 0.0;
        ln_out = ln_out.cwiseProduct(drop_mask);
    }

    Matrix F = (ln_out * params.W_ff).rowwise() + params.b_ff.transpose();
    Matrix H_out = F.array().tanh();
    if (!H_out.allFinite()) throw std::runtime_error("masked_self_attention: non-finite feed-forward output");

    Matrix C;
    if (cfg.summarizer == Summarizer::Identity) {
        C = H_out;
    } else {
        C = Matrix(L, d);
        Eigen::RowVectorXd prev = Eigen::RowVectorXd::Zero(d);
        for (int i = 0; i < L; ++i) {
            Eigen::RowVectorXd a = H_out.row(i) * params.W_r + prev * params.U_r + params.b_r.transpose();
            C.row(i) = a.array().tanh();
            prev = C.row(i);
        }
        if (!C.allFinite()) throw std::runtime_error("masked_self_attention: non-finite summarizer output");
    }

    if (cache) {
        cache->Q = std::move(Q);
        cache->K = std::move(K);
        cache->V = std::move(V);
        cache->A = A;
        cache->H_attn = std::move(H_attn);
        cache->ln_mean = std::move(ln_mean);
        cache->ln_inv_std = std::move(ln_inv_std);
        cache->ln_norm = std::move(ln_norm);
        cache->drop_mask = std::move(drop_mask);
        cache->ff_in = std::move(ln_out);
        cache->H_out = H_out;
        cache->contexts = C;
    }

    EncodedSequence enc;
    enc.inputs = X;
    enc.attention = std::move(A);
    enc.contexts = std::move(C);
    return enc;
}

EncodedSequence encode(const IndexedSequence& seq, const EncoderParams& params,
                       const ModelConfig& cfg, bool train_mode, std::uint64_t dropout_seed,
                       EncodeCache* cache) {
    if (seq.size() == 0) throw std::invalid_argument("encode: empty sequence");
    Matrix X = embed_sequence(seq, params, cfg, cache);
    return masked_self_attention(X, params, cfg, train_mode, dropout_seed, cache);
}

}  // namespace amdn
