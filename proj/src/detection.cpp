#include "amdn/detection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace amdn {

InfluenceMatrix aggregate_influence(const ModelParams& model,
                                    const std::vector<IndexedSequence>& data) {
    const int U = model.cfg.vocab_size;
    InfluenceMatrix infl;
    infl.values = Matrix::Zero(U, U);
    infl.counts = Eigen::MatrixX<std::int64_t>::Zero(U, U);
    for (const auto& seq : data) {
        EncodedSequence enc = encode(seq, model.enc, model.cfg, /*train_mode=*/false);
        const int L = static_cast<int>(seq.size());
        for (int i = 0; i < L; ++i) {
            int v = seq.accounts[i];
            for (int j = 0; j <= i; ++j) {
                int u = seq.accounts[j];
                infl.values(v, u) += enc.attention(i, j);
                infl.counts(v, u) += 1;
            }
        }
    }
    for (int v = 0; v < U; ++v)
        for (int u = 0; u < U; ++u)
            if (infl.counts(v, u) > 0) infl.values(v, u) /= static_cast<double>(infl.counts(v, u));
    return infl;
}

void write_influence_csv(const InfluenceMatrix& infl, const AccountVocabulary& vocab,
                         const std::string& values_path, const std::string& counts_path) {
    auto write = [&](const std::string& path, bool values) {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open influence CSV for writing: " + path);
        out << "account";
        for (int u = 0; u < infl.size(); ++u) out << "," << vocab.name(u);
        out << "\n";
        for (int v = 0; v < infl.size(); ++v) {
            out << vocab.name(v);
            for (int u = 0; u < infl.size(); ++u) {
                out << ",";
                if (values) {
                    if (infl.present(v, u)) out << infl.values(v, u);
                } else {
                    out << infl.counts(v, u);
                }
            }
            out << "\n";
        }
    };
    write(values_path, true);
    write(counts_path, false);
}

namespace {

double sq_dist(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
    return (a - b).squaredNorm();
}

struct KMeansRun {
    std::vector<int> assignment;
    Matrix centers;
    double inertia = std::numeric_limits<double>::infinity();
};

KMeansRun kmeans_once(const Matrix& X, int k, std::mt19937_64& rng, int max_iters) {
    const int n = static_cast<int>(X.rows());
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // k-means++ seeding
    Matrix centers(k, X.cols());
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    centers.row(0) = X.row(static_cast<int>(unif(rng) * n) % n);
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], sq_dist(X.row(i), centers.row(c - 1)));
            total += d2[i];
        }
        double pick = unif(rng) * total;
        int chosen = n - 1;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += d2[i];
            if (pick <= acc) {
                chosen = i;
                break;
            }
        }
        centers.row(c) = X.row(chosen);
    }

    KMeansRun run;
    run.assignment.assign(n, 0);
    for (int it = 0; it < max_iters; ++it) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double bd = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                double dd = sq_dist(X.row(i), centers.row(c));
                if (dd < bd) {
                    bd = dd;
                    best = c;
                }
            }
            if (run.assignment[i] != best) {
                run.assignment[i] = best;
                changed = true;
            }
        }
        Matrix sums = Matrix::Zero(k, X.cols());
        std::vector<int> counts(k, 0);
        for (int i = 0; i < n; ++i) {
            sums.row(run.assignment[i]) += X.row(i);
            counts[run.assignment[i]]++;
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                centers.row(c) = sums.row(c) / counts[c];
            } else {
                // re-seed an empty cluster on the farthest point
                int far = 0;
                double fd = -1.0;
                for (int i = 0; i < n; ++i) {
                    double dd = sq_dist(X.row(i), centers.row(run.assignment[i]));
                    if (dd > fd) {
                        fd = dd;
                        far = i;
                    }
                }
                centers.row(c) = X.row(far);
                changed = true;
            }
        }
        if (!changed && it > 0) break;
    }
    run.inertia = 0.0;
    for (int i = 0; i < n; ++i) run.inertia += sq_dist(X.row(i), centers.row(run.assignment[i]));
    run.centers = std::move(centers);
    return run;
}

std::vector<int> gmm_diag(const Matrix& X, int k, const KMeansRun& init, int iters) {
    const int n = static_cast<int>(X.rows());
    const int p = static_cast<int>(X.cols());
    Matrix means = init.centers;
    Matrix vars = Matrix::Constant(k, p, 1e-2);
    Vector weights = Vector::Constant(k, 1.0 / k);
    {
        std::vector<int> counts(k, 0);
        Matrix ssq = Matrix::Zero(k, p);
        for (int i = 0; i < n; ++i) {
            int c = init.assignment[i];
            counts[c]++;
            ssq.row(c) += (X.row(i) - means.row(c)).array().square().matrix();
        }
        for (int c = 0; c < k; ++c)
            if (counts[c] > 1) vars.row(c) = (ssq.row(c) / counts[c]).cwiseMax(1e-6);
    }

    Matrix resp(n, k);
    for (int it = 0; it < iters; ++it) {
        // E step
        for (int i = 0; i < n; ++i) {
            Vector logp(k);
            for (int c = 0; c < k; ++c) {
                double lp = std::log(std::max(weights[c], 1e-12));
                for (int jdim = 0; jdim < p; ++jdim) {
                    double v = vars(c, jdim);
                    double z = X(i, jdim) - means(c, jdim);
                    lp += -0.5 * std::log(2.0 * M_PI * v) - 0.5 * z * z / v;
                }
                logp[c] = lp;
            }
            double m = logp.maxCoeff();
            Vector e = (logp.array() - m).exp();
            resp.row(i) = (e / e.sum()).transpose();
        }
        // M step
        Vector nk = resp.colwise().sum().transpose();
        for (int c = 0; c < k; ++c) {
            if (nk[c] < 1e-8) continue;
            means.row(c) = (resp.col(c).transpose() * X) / nk[c];
            Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(p);
            for (int i = 0; i < n; ++i)
                v += resp(i, c) * (X.row(i) - means.row(c)).array().square().matrix();
            vars.row(c) = (v / nk[c]).cwiseMax(1e-6);
            weights[c] = nk[c] / n;
        }
    }
    std::vector<int> assignment(n);
    for (int i = 0; i < n; ++i) {
        Eigen::Index c = 0;
        resp.row(i).maxCoeff(&c);
        assignment[i] = static_cast<int>(c);
    }
    return assignment;
}

}  // namespace

std::vector<int> cluster_rows(const Matrix& features, int k, ClusterMethod method,
                              std::uint64_t seed, const ClusterOptions& opts) {
    const int n = static_cast<int>(features.rows());
    if (k < 1 || k > n) throw std::invalid_argument("cluster_rows: k must be in [1, n]");
    if (k == 1) return std::vector<int>(n, 0);

    std::mt19937_64 rng(seed);
    KMeansRun best;
    for (int r = 0; r < opts.restarts; ++r) {
        KMeansRun run = kmeans_once(features, k, rng, opts.max_iters);
        if (run.inertia < best.inertia) best = std::move(run);
    }
    if (method == ClusterMethod::KMeans) return best.assignment;
    return gmm_diag(features, k, best, opts.gmm_iters);
}

std::vector<int> cluster_accounts(const ModelParams& model, int k, ClusterMethod method,
                                  std::uint64_t seed, const ClusterOptions& opts) {
    return cluster_rows(model.enc.W_e, k, method, seed, opts);
}

std::vector<int> flag_coordinated(const std::vector<int>& assignment,
                                  const InfluenceMatrix& influence) {
    const int U = influence.size();
    if (static_cast<int>(assignment.size()) != U)
        throw std::invalid_argument("flag_coordinated: assignment/influence size mismatch");
    int k = 1 + *std::max_element(assignment.begin(), assignment.end());

    std::vector<double> mean_intra(k, 0.0);
    std::vector<int> present(k, 0), sizes(k, 0);
    for (int a : assignment) sizes[a]++;
    for (int v = 0; v < U; ++v) {
        for (int u = 0; u < U; ++u) {
            if (v == u || assignment[v] != assignment[u] || !influence.present(v, u)) continue;
            mean_intra[assignment[v]] += influence.values(v, u);
            present[assignment[v]]++;
        }
    }

    int best = -1;
    for (int c = 0; c < k; ++c) {
        if (present[c] == 0) {
            std::cerr << "flag_coordinated: cluster " << c
                      << " has no observed intra-cluster influence, skipping\n";
            continue;
        }
        mean_intra[c] /= present[c];
        if (best < 0 || mean_intra[c] > mean_intra[best] ||
            (mean_intra[c] == mean_intra[best] &&
             (sizes[c] < sizes[best] || (sizes[c] == sizes[best] && c < best)))) {
            best = c;
        }
    }
    if (best < 0) throw std::runtime_error("flag_coordinated: no cluster has intra-cluster influence");

    std::vector<int> flags(U, 0);
    for (int i = 0; i < U; ++i) flags[i] = assignment[i] == best ? 1 : 0;
    return flags;
}

std::vector<double> anomaly_scores(const std::vector<int>& flagged,
                                   const InfluenceMatrix& influence) {
    const int U = influence.size();
    std::vector<double> scores(U, 0.0);
    for (int a = 0; a < U; ++a) {
        double sum = 0.0;
        int n = 0;
        for (int u = 0; u < U; ++u) {
            if (u == a || !flagged[u]) continue;
            if (influence.present(a, u)) {
                sum += influence.values(a, u);
                n++;
            }
            if (influence.present(u, a)) {
                sum += influence.values(u, a);
                n++;
            }
        }
        scores[a] = n > 0 ? sum / n : 0.0;
    }
    return scores;
}

namespace {

Vector train_logistic(const Matrix& X, const std::vector<int>& y, int iters, double lr,
                      double l2) {
    const int n = static_cast<int>(X.rows());
    const int p = static_cast<int>(X.cols());
    Vector w = Vector::Zero(p + 1);  // last entry is the bias
    for (int it = 0; it < iters; ++it) {
        Vector grad = Vector::Zero(p + 1);
        for (int i = 0; i < n; ++i) {
            double z = X.row(i).dot(w.head(p)) + w[p];
            double pr = 1.0 / (1.0 + std::exp(-z));
            double err = pr - y[i];
            grad.head(p) += err * X.row(i).transpose();
            grad[p] += err;
        }
        grad.head(p) += l2 * w.head(p);
        w -= (lr / n) * grad;
    }
    return w;
}

}  // namespace

std::vector<double> supervised_scores(const Matrix& embeddings, const std::vector<int>& labels,
                                      int folds, std::uint64_t seed) {
    const int n = static_cast<int>(embeddings.rows());
    if (static_cast<int>(labels.size()) != n)
        throw std::invalid_argument("supervised_scores: label/embedding size mismatch");
    if (folds < 2) throw std::invalid_argument("supervised_scores: folds must be >= 2");

    std::vector<int> pos, neg;
    for (int i = 0; i < n; ++i) {
        if (labels[i] == 1) pos.push_back(i);
        else if (labels[i] == 0) neg.push_back(i);
    }
    if (pos.empty() || neg.empty())
        throw std::invalid_argument("supervised_scores: need both classes in the labels");

    std::mt19937_64 rng(seed);
    std::shuffle(pos.begin(), pos.end(), rng);
    std::shuffle(neg.begin(), neg.end(), rng);
    std::vector<int> fold_of(n, -1);
    for (std::size_t i = 0; i < pos.size(); ++i) fold_of[pos[i]] = static_cast<int>(i % folds);
    for (std::size_t i = 0; i < neg.size(); ++i) fold_of[neg[i]] = static_cast<int>(i % folds);

    std::vector<double> scores(n, std::numeric_limits<double>::quiet_NaN());
    const int p = static_cast<int>(embeddings.cols());
    for (int f = 0; f < folds; ++f) {
        std::vector<int> tr_idx, te_idx;
        for (int i = 0; i < n; ++i) {
            if (fold_of[i] < 0) continue;
            (fold_of[i] == f ? te_idx : tr_idx).push_back(i);
        }
        if (te_idx.empty() || tr_idx.empty()) continue;

        // standardize on the training fold
        Matrix Xtr(tr_idx.size(), p);
        std::vector<int> ytr;
        for (std::size_t i = 0; i < tr_idx.size(); ++i) {
            Xtr.row(i) = embeddings.row(tr_idx[i]);
            ytr.push_back(labels[tr_idx[i]]);
        }
        Eigen::RowVectorXd mean = Xtr.colwise().mean();
        Eigen::RowVectorXd std =
            ((Xtr.rowwise() - mean).array().square().colwise().mean().sqrt() + 1e-8).matrix();
        Xtr = (Xtr.rowwise() - mean).array().rowwise() / std.array();

        Vector w = train_logistic(Xtr, ytr, 800, 1.0, 1e-3);
        for (int i : te_idx) {
            Eigen::RowVectorXd x =
                ((embeddings.row(i) - mean).array() / std.array()).matrix();
            double z = x.dot(w.head(p).transpose()) + w[p];
            scores[i] = 1.0 / (1.0 + std::exp(-z));
        }
    }
    return scores;
}

DetectionMetrics detection_metrics(const std::vector<double>& scores,
                                   const std::vector<int>& flags, const std::vector<int>& labels) {
    const std::size_t n = labels.size();
    if (scores.size() != n || flags.size() != n)
        throw std::invalid_argument("detection_metrics: score/flag/label length mismatch");
    std::size_t n_pos = 0, n_neg = 0;
    for (int l : labels) (l == 1 ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0)
        throw std::invalid_argument("detection_metrics: labels must contain both classes");

    DetectionMetrics m;

    // AUC: rank-sum with average ranks on ties (tied pairs count 1/2)
    {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
        std::vector<double> rank(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && scores[idx[j + 1]] == scores[idx[i]]) ++j;
            double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = avg;
            i = j + 1;
        }
        double rank_sum = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            if (labels[k] == 1) rank_sum += rank[k];
        m.auc = (rank_sum - n_pos * (n_pos + 1) / 2.0) / (static_cast<double>(n_pos) * n_neg);
    }

    // AP via threshold sweep (step interpolation), and MaxF1 on the same sweep
    {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
        double ap = 0.0, prev_recall = 0.0, max_f1 = 0.0;
        std::size_t tp = 0, fp = 0, i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && scores[idx[j + 1]] == scores[idx[i]]) ++j;
            for (std::size_t k = i; k <= j; ++k) (labels[idx[k]] == 1 ? tp : fp)++;
            double prec = static_cast<double>(tp) / (tp + fp);
            double rec = static_cast<double>(tp) / n_pos;
            ap += (rec - prev_recall) * prec;
            prev_recall = rec;
            if (prec + rec > 0) max_f1 = std::max(max_f1, 2 * prec * rec / (prec + rec));
            i = j + 1;
        }
        m.ap = ap;
        m.max_f1 = max_f1;
    }

    // hard-flag metrics
    {
        std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (flags[k] == 1)
                (labels[k] == 1 ? tp : fp)++;
            else
                (labels[k] == 1 ? fn : tn)++;
        }
        m.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
        m.recall = static_cast<double>(tp) / n_pos;
        m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall)
                                          : 0.0;
        double prec0 = tn + fn > 0 ? static_cast<double>(tn) / (tn + fn) : 0.0;
        double rec0 = static_cast<double>(tn) / n_neg;
        double f1_0 = prec0 + rec0 > 0 ? 2 * prec0 * rec0 / (prec0 + rec0) : 0.0;
        m.macro_f1 = 0.5 * (m.f1 + f1_0);
    }
    return m;
}

PageRankResult pagerank_influence(const InfluenceMatrix& influence, double damping, int top_k) {
    if (!(damping > 0.0 && damping < 1.0))
        throw std::invalid_argument("pagerank_influence: damping must be in (0, 1)");
    const int N = influence.size();

    // transition: edge u -> v with weight values(v, u); columns normalized
    Matrix P = Matrix::Zero(N, N);
    std::vector<bool> dangling(N, false);
    for (int u = 0; u < N; ++u) {
        double out = 0.0;
        for (int v = 0; v < N; ++v)
            if (influence.present(v, u)) out += influence.values(v, u);
        if (out <= 0.0) {
            dangling[u] = true;
            continue;
        }
        for (int v = 0; v < N; ++v)
            if (influence.present(v, u)) P(v, u) = influence.values(v, u) / out;
    }

    Vector r = Vector::Constant(N, 1.0 / N);
    PageRankResult res;
    for (int it = 0; it < 10000; ++it) {
        double dangling_mass = 0.0;
        for (int u = 0; u < N; ++u)
            if (dangling[u]) dangling_mass += r[u];
        Vector next = Vector::Constant(N, (1.0 - damping) / N);
        next += damping * (P * r + Vector::Constant(N, dangling_mass / N));
        double residual = (next - r).cwiseAbs().sum();
        r = next;
        res.iterations = it + 1;
        if (residual < 1e-10) {
            res.scores = r;
            std::vector<int> order(N);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&](int a, int b) { return r[a] > r[b]; });
            if (top_k > 0 && top_k < N) order.resize(top_k);
            res.ranking = std::move(order);
            return res;
        }
    }
    throw std::runtime_error("pagerank_influence: power iteration did not converge");
}

}  // namespace amdn
