#pragma once

#include <cstdint>
#include <random>

#include "amdn/encoder.hpp"

namespace amdn {

// Log-normal mixture over the next inter-event time.
struct MixtureParams {
    Vector weights;     // K, on the simplex
    Vector means;       // K, log-space
    Vector scales;      // K, > 0
};

struct HeadParams {
    // mixture projections, row convention: a = c * V + b
    Matrix V_w, V_s, V_mu;  // d x K
    Vector b_w, b_s, b_mu;  // K
    // type head: two-layer MLP d -> hidden -> vocab
    Matrix W1;  // d x hidden
    Vector b1;  // hidden
    Matrix W2;  // hidden x vocab
    Vector b2;  // vocab
};

MixtureParams mixture_from_context(const Vector& context, const HeadParams& params,
                                   double log_scale_clamp = 10.0);

// log p(tau) of the mixture; throws std::domain_error for tau <= 0.
double lognormal_mixture_logpdf(double tau, const MixtureParams& mix);

// Ancestral sample: component ~ Categorical(w), tau = exp(mu + s z).
double sample_inter_event_time(const MixtureParams& mix, std::uint64_t seed);
double sample_inter_event_time(const MixtureParams& mix, std::mt19937_64& rng);

struct NllBreakdown {
    double total = 0.0;      // time + type, summed over predicted events
    double time = 0.0;
    double type = 0.0;
    int type_correct = 0;    // argmax matches
    int predicted = 0;       // number of events with a likelihood term (L - 1)
};

// Exact sequence negative log-likelihood. Event i >= 1 is predicted from
// context i-1; event 0 contributes nothing. Inter-event times are clamped to
// tau_eps, divided by tau_mean for evaluation, and the log-normalizer
// log(tau_mean) is added back so the NLL is in original time units.
NllBreakdown sequence_nll(const IndexedSequence& seq, const EncodedSequence& encoded,
                          const HeadParams& params, const ModelConfig& cfg, double tau_mean);

// Type-head forward: softmax logits of the next-account distribution.
Vector type_logits(const Vector& context, const HeadParams& params);

}  // namespace amdn
