#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "amdn/density_head.hpp"
#include "amdn/encoder.hpp"
#include "amdn/event_data.hpp"

namespace amdn {

// Full parameter bundle. tau_mean and the temporal frequency grid are data
// statistics fixed at initialization, carried here so a checkpoint is
// self-contained.
struct ModelParams {
    ModelConfig cfg;
    EncoderParams enc;
    HeadParams head;
    double tau_mean = 1.0;

    // Visits every learnable tensor as a flat span. weight_decay marks
    // matrices subject to decoupled decay (not biases / layer-norm /
    // temporal coefficients).
    void visit(const std::function<void(const std::string& name, double* data, std::ptrdiff_t size,
                                        bool weight_decay)>& fn);
    void visit(const std::function<void(const std::string& name, const double* data,
                                        std::ptrdiff_t size, bool weight_decay)>& fn) const;

    std::ptrdiff_t num_params() const;
    Vector flatten() const;
    void unflatten(const Vector& flat);

    // Same-shaped bundle with all learnables zeroed (for gradients).
    ModelParams zeros_like() const;
};

// Random initialization: uniform(-a, a) with a = 1/sqrt(fan_in) for
// embeddings and projections; layer-norm gain 1, biases 0; temporal
// coefficients 1/sqrt(m_t). Frequencies and tau_mean come from data stats.
ModelParams init_model(const ModelConfig& cfg, const std::vector<IndexedSequence>& train_data,
                       std::uint64_t seed);

struct TrainConfig {
    int batch_size = 256;
    int max_epochs = 1000;
    int patience = 20;
    std::uint64_t seed = 0;
    double learning_rate = 1e-3;
    double weight_decay = 1e-5;
    bool l2_in_loss = false;  // alternative reading of the regularization: L2 penalty in the loss
    ModelConfig model;
};

struct OptimizerState {
    Vector m, v;      // first/second moments, flat layout
    long step = 0;
    double learning_rate = 1e-3;
    double weight_decay = 1e-5;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
};

OptimizerState make_optimizer(const ModelParams& params, double lr, double weight_decay);

// Standard bias-corrected Adam with decoupled weight decay on weight
// matrices only.
void adam_step(ModelParams& params, const ModelParams& grads, OptimizerState& state);

struct LossResult {
    double loss = 0.0;       // mean per-event NLL over the batch
    ModelParams grads;
};

// Exact reverse-mode gradients of the batch-mean NLL through encoder and
// heads. dropout_seed drives the (per-sequence) dropout masks in train mode.
LossResult loss_and_gradients(const std::vector<IndexedSequence>& batch, const ModelParams& params,
                              bool train_mode, std::uint64_t dropout_seed,
                              double l2_penalty = 0.0);

struct EpochLog {
    int epoch = 0;
    double train_nll = 0.0;
    double val_nll = 0.0;
    double wall_time_s = 0.0;
};

struct TrainResult {
    ModelParams best_params;
    std::vector<EpochLog> log;
    double best_val_nll = 0.0;
    int best_epoch = -1;
};

struct IndexedSplit {
    std::vector<IndexedSequence> train, validation, test;
};

TrainResult train(const IndexedSplit& data, const TrainConfig& config);

struct EvalMetrics {
    double nll = 0.0;             // per predicted event
    double event_time_nll = 0.0;
    double event_type_nll = 0.0;
    double event_type_accuracy = 0.0;
};

EvalMetrics evaluate(const std::vector<IndexedSequence>& data, const ModelParams& params);

// Versioned JSON checkpoint: config, vocabulary, parameters, optimizer
// state, epoch counter.
void save_checkpoint(const std::string& path, const ModelParams& params,
                     const AccountVocabulary& vocab, const OptimizerState* opt = nullptr,
                     int epoch = 0);

struct Checkpoint {
    ModelParams params;
    AccountVocabulary vocab;
    OptimizerState opt;
    bool has_opt = false;
    int epoch = 0;
};

Checkpoint load_checkpoint(const std::string& path);

}  // namespace amdn
