#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "amdn/training.hpp"

namespace amdn {

// Account-level influence: entry (v, u) is the mean attention that events of
// type v pay to prior events of type u. Entries with count 0 are missing,
// not zero.
struct InfluenceMatrix {
    Matrix values;                     // |U| x |U|
    Eigen::MatrixX<std::int64_t> counts;

    bool present(int v, int u) const { return counts(v, u) > 0; }
    int size() const { return static_cast<int>(values.rows()); }
};

InfluenceMatrix aggregate_influence(const ModelParams& model,
                                    const std::vector<IndexedSequence>& data);

void write_influence_csv(const InfluenceMatrix& infl, const AccountVocabulary& vocab,
                         const std::string& values_path, const std::string& counts_path);

enum class ClusterMethod { KMeans, Gmm };

struct ClusterOptions {
    int restarts = 50;      // k-means++ restarts
    int max_iters = 200;
    int gmm_iters = 100;
};

// Clusters rows of the learned account embedding matrix W_e.
std::vector<int> cluster_accounts(const ModelParams& model, int k, ClusterMethod method,
                                  std::uint64_t seed, const ClusterOptions& opts = {});

// Same entry point on an explicit feature matrix (rows = accounts).
std::vector<int> cluster_rows(const Matrix& features, int k, ClusterMethod method,
                              std::uint64_t seed, const ClusterOptions& opts = {});

// Flags the cluster with the highest mean intra-cluster influence over
// present off-diagonal entries; ties break toward the smaller cluster, then
// the lowest cluster id. Clusters with no present intra entries are skipped.
std::vector<int> flag_coordinated(const std::vector<int>& assignment,
                                  const InfluenceMatrix& influence);

// Anomaly score for ranking: an account's mean influence with the flagged
// set (present off-diagonal entries in either direction).
std::vector<double> anomaly_scores(const std::vector<int>& flagged,
                                   const InfluenceMatrix& influence);

// Stratified k-fold logistic regression on embedding rows; returns
// out-of-fold probabilities for every labeled account (-1 labels = unlabeled,
// score NaN).
std::vector<double> supervised_scores(const Matrix& embeddings, const std::vector<int>& labels,
                                      int folds, std::uint64_t seed);

struct DetectionMetrics {
    double ap = 0.0, auc = 0.0;
    double f1 = 0.0, precision = 0.0, recall = 0.0;
    double max_f1 = 0.0, macro_f1 = 0.0;
};

// scores drive AP / AUC / MaxF1; flags drive F1 / Prec / Rec / MacroF1.
DetectionMetrics detection_metrics(const std::vector<double>& scores,
                                   const std::vector<int>& flags, const std::vector<int>& labels);

struct DetectionResult {
    std::vector<int> assignment;
    std::vector<int> flagged;         // 0/1 per account
    std::vector<double> scores;
    DetectionMetrics metrics;
    bool has_metrics = false;
};

// Power iteration with damping on the influence graph (edge u -> v weighted
// by values(v, u)); returns all account indices sorted by score descending,
// truncated to top_k (top_k <= 0 keeps all), plus the full score vector.
struct PageRankResult {
    std::vector<int> ranking;
    Vector scores;
    int iterations = 0;
};

PageRankResult pagerank_influence(const InfluenceMatrix& influence, double damping = 0.85,
                                  int top_k = 0);

}  // namespace amdn
