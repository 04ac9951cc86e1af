#include "amdn/density_head.hpp"

#include <cmath>
#include <stdexcept>

namespace amdn {

namespace {
constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5 * log(2*pi)

double logsumexp(const Vector& v) {
    double m = v.maxCoeff();
    return m + std::log((v.array() - m).exp().sum());
}
}  // namespace

MixtureParams mixture_from_context(const Vector& context, const HeadParams& params,
                                   double log_scale_clamp) {
    if (!context.allFinite()) throw std::runtime_error("mixture_from_context: non-finite context");
    Vector aw = params.V_w.transpose() * context + params.b_w;
    Vector as = params.V_s.transpose() * context + params.b_s;
    Vector mu = params.V_mu.transpose() * context + params.b_mu;

    MixtureParams mix;
    double m = aw.maxCoeff();
    Vector e = (aw.array() - m).exp();
    mix.weights = e / e.sum();
    mix.scales = as.array().min(log_scale_clamp).max(-log_scale_clamp).exp();
    mix.means = std::move(mu);
    if (!mix.scales.allFinite()) throw std::runtime_error("mixture_from_context: non-finite scales");
    return mix;
}

double lognormal_mixture_logpdf(double tau, const MixtureParams& mix) {
    if (!(tau > 0.0)) throw std::domain_error("lognormal_mixture_logpdf: tau must be > 0");
    double x = std::log(tau);
    const int K = static_cast<int>(mix.weights.size());
    Vector terms(K);
    for (int k = 0; k < K; ++k) {
        double z = (x - mix.means[k]) / mix.scales[k];
        terms[k] = std::log(mix.weights[k]) - std::log(mix.scales[k]) - 0.5 * z * z;
    }
    return logsumexp(terms) - x - kHalfLog2Pi;
}

double sample_inter_event_time(const MixtureParams& mix, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(rng);
    int k = 0;
    double acc = 0.0;
    for (; k < mix.weights.size() - 1; ++k) {
        acc += mix.weights[k];
        if (u < acc) break;
    }
    // Box-Muller, fully specified so samples are stable across platforms
    double u1 = unif(rng), u2 = unif(rng);
    if (u1 <= 0.0) u1 = std::numeric_limits<double>::min();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return std::exp(mix.means[k] + mix.scales[k] * z);
}

double sample_inter_event_time(const MixtureParams& mix, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return sample_inter_event_time(mix, rng);
}

Vector type_logits(const Vector& context, const HeadParams& params) {
    Vector h = (params.W1.transpose() * context + params.b1).array().tanh();
    return params.W2.transpose() * h + params.b2;
}

NllBreakdown sequence_nll(const IndexedSequence& seq, const EncodedSequence& encoded,
                          const HeadParams& params, const ModelConfig& cfg, double tau_mean) {
    const int L = static_cast<int>(seq.size());
    if (encoded.contexts.rows() != L)
        throw std::invalid_argument("sequence_nll: encoded/sequence length mismatch");

    NllBreakdown out;
    for (int i = 1; i < L; ++i) {
        Vector c = encoded.contexts.row(i - 1).transpose();
        MixtureParams mix = mixture_from_context(c, params, cfg.log_scale_clamp);
        double tau = std::max(seq.times[i] - seq.times[i - 1], cfg.tau_eps);
        out.time += -lognormal_mixture_logpdf(tau / tau_mean, mix) + std::log(tau_mean);

        Vector logits = type_logits(c, params);
        double lse = logsumexp(logits);
        out.type += lse - logits[seq.accounts[i]];
        Eigen::Index argmax = 0;
        logits.maxCoeff(&argmax);
        if (static_cast<int>(argmax) == seq.accounts[i]) out.type_correct++;
        out.predicted++;
    }
    out.total = out.time + out.type;
    return out;
}

}  // namespace amdn
