#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "amdn/event_data.hpp"

namespace amdn {

using HMatrix = Eigen::MatrixXd;
using HVector = Eigen::VectorXd;

// Multivariate Hawkes with exponential kernel kappa(dt) = beta * exp(-beta dt).
// alpha(i, j) is the influence of event type j on type i.
struct HawkesModel {
    HVector mu;         // base rates, > 0
    HMatrix alpha;      // |U| x |U|, >= 0
    double beta = 1.0;  // shared decay, > 0
    // embeddings from factorized fitting (empty unless produced by fit_hawkes)
    HMatrix src_embed, tgt_embed;  // |U| x r

    int num_types() const { return static_cast<int>(mu.size()); }
    // spectral radius of alpha (integrated kernel mass is 1)
    double branching_radius() const;
};

double intensity(const HawkesModel& model, int account, double t, const IndexedSequence& history);

struct SimulateOptions {
    std::size_t event_cap = 200000;
};

// Ogata thinning; deterministic per seed. Throws if the event cap trips.
IndexedSequence simulate(const HawkesModel& model, double horizon, std::uint64_t seed,
                         const SimulateOptions& opts = {});

// Exact log-likelihood under the exponential-kernel Hawkes model. horizon <= 0
// means "use each sequence's last timestamp".
double hawkes_loglik(const HawkesModel& model, const std::vector<IndexedSequence>& data,
                     double horizon = 0.0);

// Per-event NLL (negated mean log-likelihood over events), comparable with the
// neural model's total NLL.
double hawkes_nll_per_event(const HawkesModel& model, const std::vector<IndexedSequence>& data,
                            double horizon = 0.0);

struct HawkesFitConfig {
    int rank = 16;
    int max_iters = 500;
    double init_step = 0.05;
    double tol = 1e-7;       // relative loglik improvement stop
    std::uint64_t seed = 0;
    double horizon = 0.0;    // 0: use last timestamp per sequence
};

struct HawkesFitResult {
    HawkesModel model;
    std::vector<double> loglik_path;  // non-decreasing (monotone line search)
};

// MLE by monotone gradient ascent on log-mu, embeddings (alpha =
// softplus(<src_i, tgt_j>)) and log-beta.
HawkesFitResult fit_hawkes(const std::vector<IndexedSequence>& data, const HawkesFitConfig& config);

struct ScenarioConfig {
    int num_accounts = 30;
    int group_size = 6;                 // planted coordinated accounts: indices 0..group_size-1
    double intra_excitation = 0.08;     // alpha within the group
    double background_excitation = 0.01;
    double outsider_to_group = 1e-4;    // influence of non-group on group
    double base_rate_min = 0.02, base_rate_max = 0.06;
    double beta = 1.0;
    double horizon = 400.0;
    int num_sequences = 200;
};

struct Scenario {
    HawkesModel model;
    std::vector<EventSequence> sequences;  // account names "u<i>"
    std::vector<int> labels;               // 1 for planted group members
};

// Builds the planted-group generator (checks stability first) and simulates.
Scenario make_scenario(const ScenarioConfig& config, std::uint64_t seed);

}  // namespace amdn
