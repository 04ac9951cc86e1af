#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "amdn/event_data.hpp"

namespace amdn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Summarizer { Identity, Recurrent };
enum class TemporalCombine { Sum, Stack };

struct ModelConfig {
    int vocab_size = 0;
    int m_e = 32;  // event embedding dim
    int m_p = 16;  // positional dim (even)
    int m_t = 16;  // temporal dim (per frequency, summed over frequencies)
    int num_freqs = 8;
    int K = 8;             // mixture components
    int type_hidden = 64;  // type-head MLP hidden width
    double dropout = 0.1;
    double log_scale_clamp = 10.0;  // |log s| bound before exp
    double tau_eps = 1e-4;          // zero inter-event-time clamp, seconds
    Summarizer summarizer = Summarizer::Identity;
    TemporalCombine temporal_combine = TemporalCombine::Sum;

    // Input dim d = m_e + m_p + m_t (Stack multiplies the temporal slice by
    // num_freqs).
    int temporal_dim() const {
        return temporal_combine == TemporalCombine::Sum ? m_t : m_t * num_freqs;
    }
    int d() const { return m_e + m_p + temporal_dim(); }
};

struct EncoderParams {
    Matrix W_e;              // vocab_size x m_e
    Matrix W_q, W_k, W_v;    // d x d
    Vector ln_gain, ln_bias; // d
    Matrix W_ff;             // d x d  (row convention: out = in * W)
    Vector b_ff;             // d
    Matrix temporal_coeff;   // num_freqs x m_t, entries are the sqrt-coefficients
    Vector freqs;            // num_freqs, fixed from data (not learned)
    // recurrent summarizer (allocated only when enabled)
    Matrix W_r, U_r;         // d x d
    Vector b_r;              // d
};

struct EncodedSequence {
    Matrix inputs;    // L x d
    Matrix attention; // L x L, lower triangular, rows sum to 1 over j <= i
    Matrix contexts;  // L x d
};

// Everything the backward pass needs from a forward run.
struct EncodeCache {
    std::vector<double> dts;           // per-event inter-event time (dt_0 = 0)
    std::vector<Matrix> temporal_basis;// per event: num_freqs x m_t basis values
    Matrix X, Q, K, V, A, H_attn;
    Vector ln_mean, ln_inv_std;        // per row
    Matrix ln_norm;                    // (h - mean)/std, pre gain
    Matrix drop_mask;                  // empty when dropout inactive
    Matrix ff_in;                      // LN output after dropout
    Matrix H_out;                      // tanh(ff_in * W_ff + b_ff)
    Matrix contexts;                   // == H_out for identity summarizer
};

// Sinusoidal position features, Eq.-style: slot 2j = sin, 2j+1 = cos.
Vector positional_encoding(int pos, int m_p);

// Translation-invariant temporal features for one inter-event gap.
Vector temporal_encoding(double delta_t, const EncoderParams& params, const ModelConfig& cfg);

// Row i = [embedding(u_i), PE(i), phi(t_i - t_{i-1})], dt of event 0 is 0.
Matrix embed_sequence(const IndexedSequence& seq, const EncoderParams& params,
                      const ModelConfig& cfg, EncodeCache* cache = nullptr);

// Causal softmax attention + layer norm + dropout + feed-forward.
// Dropout fires only when train_mode and cfg.dropout > 0; mask drawn from seed.
EncodedSequence masked_self_attention(const Matrix& X, const EncoderParams& params,
                                      const ModelConfig& cfg, bool train_mode = false,
                                      std::uint64_t dropout_seed = 0,
                                      EncodeCache* cache = nullptr);

EncodedSequence encode(const IndexedSequence& seq, const EncoderParams& params,
                       const ModelConfig& cfg, bool train_mode = false,
                       std::uint64_t dropout_seed = 0, EncodeCache* cache = nullptr);

}  // namespace amdn
