#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

#include "amdn/detection.hpp"
#include "test_helpers.hpp"

using namespace amdn;
using namespace amdn::testing;

namespace {

InfluenceMatrix make_influence(int n) {
    InfluenceMatrix infl;
    infl.values = Matrix::Zero(n, n);
    infl.counts = Eigen::MatrixX<std::int64_t>::Zero(n, n);
    return infl;
}

void set_entry(InfluenceMatrix& infl, int v, int u, double val) {
    infl.values(v, u) = val;
    infl.counts(v, u) = 1;
}

// pairwise-counting oracle, ties worth one half
double auc_oracle(const std::vector<double>& s, const std::vector<int>& y) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (y[i] != 1 || y[j] != 0) continue;
            den += 1.0;
            if (s[i] > s[j]) num += 1.0;
            else if (s[i] == s[j]) num += 0.5;
        }
    return num / den;
}

double f1_at(const std::vector<int>& pred, const std::vector<int>& y) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (pred[i] == 1 && y[i] == 1) tp++;
        if (pred[i] == 1 && y[i] == 0) fp++;
        if (pred[i] == 0 && y[i] == 1) fn++;
    }
    if (tp == 0) return 0.0;
    return 2 * tp / (2 * tp + fp + fn);
}

}  // namespace

TEST_CASE("aggregate_influence") {
    ModelConfig cfg = small_config(3);
    auto warm = random_sequence(4, 3, 1);
    ModelParams p = init_model(cfg, {warm}, 0);

    SUBCASE("two-event bookkeeping") {
        IndexedSequence s;
        s.id = "s";
        s.accounts = {0, 1};
        s.times = {0.0, 1.0};
        EncodedSequence e = encode(s, p.enc, cfg, false);
        InfluenceMatrix infl = aggregate_influence(p, {s});
        CHECK(infl.values(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(infl.values(1, 0) == doctest::Approx(e.attention(1, 0)).epsilon(1e-12));
        CHECK(infl.values(1, 1) == doctest::Approx(e.attention(1, 1)).epsilon(1e-12));
        CHECK(infl.present(0, 0));
        CHECK(infl.present(1, 0));
        CHECK_FALSE(infl.present(0, 1));  // 1 never precedes 0 here
        CHECK_FALSE(infl.present(2, 2));  // account 2 absent entirely
    }

    SUBCASE("three-event enumeration oracle with a repeated account") {
        IndexedSequence s;
        s.id = "s";
        s.accounts = {0, 1, 0};
        s.times = {0.0, 0.7, 1.9};
        EncodedSequence e = encode(s, p.enc, cfg, false);
        InfluenceMatrix infl = aggregate_influence(p, {s});
        // (0 <- 0) pools A(0,0), A(2,0), A(2,2)
        double expect00 = (e.attention(0, 0) + e.attention(2, 0) + e.attention(2, 2)) / 3.0;
        CHECK(infl.counts(0, 0) == 3);
        CHECK(infl.values(0, 0) == doctest::Approx(expect00).epsilon(1e-12));
        CHECK(infl.values(0, 1) == doctest::Approx(e.attention(2, 1)).epsilon(1e-12));
        CHECK(infl.values(1, 0) == doctest::Approx(e.attention(1, 0)).epsilon(1e-12));
        CHECK(infl.values(1, 1) == doctest::Approx(e.attention(1, 1)).epsilon(1e-12));
    }

    SUBCASE("attention mass is conserved per target type") {
        std::vector<IndexedSequence> data = {random_sequence(12, 3, 2), random_sequence(9, 3, 3)};
        InfluenceMatrix infl = aggregate_influence(p, data);
        std::vector<double> mass(3, 0.0);
        std::vector<int> events(3, 0);
        for (const auto& s : data)
            for (int a : s.accounts) events[a]++;
        for (int v = 0; v < 3; ++v)
            for (int u = 0; u < 3; ++u) mass[v] += infl.values(v, u) * infl.counts(v, u);
        // each attention row sums to 1, so type-v mass equals its event count
        for (int v = 0; v < 3; ++v) CHECK(mass[v] == doctest::Approx(events[v]).epsilon(1e-9));
        CHECK(infl.values.minCoeff() >= 0.0);
    }
}

TEST_CASE("cluster_rows") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> noise(0.0, 0.1);
    Matrix blobs(40, 3);
    std::vector<int> truth(40);
    for (int i = 0; i < 40; ++i) {
        truth[i] = i % 2;
        for (int d = 0; d < 3; ++d) blobs(i, d) = (truth[i] ? 5.0 : -5.0) + noise(rng);
    }

    SUBCASE("well-separated blobs are recovered exactly, k-means and GMM") {
        for (ClusterMethod method : {ClusterMethod::KMeans, ClusterMethod::Gmm}) {
            std::vector<int> a = cluster_rows(blobs, 2, method, 7);
            for (int i = 2; i < 40; ++i) {
                CHECK((a[i] == a[i % 2]) == (truth[i] == truth[i % 2]));
            }
            CHECK(a[0] != a[1]);
        }
    }

    SUBCASE("k = 1 puts everyone together") {
        std::vector<int> a = cluster_rows(blobs, 1, ClusterMethod::KMeans, 0);
        for (int x : a) CHECK(x == 0);
    }

    SUBCASE("k out of range is a parameter error") {
        CHECK_THROWS_AS(cluster_rows(blobs, 41, ClusterMethod::KMeans, 0), std::invalid_argument);
        CHECK_THROWS_AS(cluster_rows(blobs, 0, ClusterMethod::KMeans, 0), std::invalid_argument);
    }

    SUBCASE("deterministic per seed") {
        CHECK(cluster_rows(blobs, 3, ClusterMethod::KMeans, 11) ==
              cluster_rows(blobs, 3, ClusterMethod::KMeans, 11));
        CHECK(cluster_rows(blobs, 3, ClusterMethod::Gmm, 11) ==
              cluster_rows(blobs, 3, ClusterMethod::Gmm, 11));
    }

    SUBCASE("k-means output is a fixed point of Lloyd's step") {
        std::mt19937_64 g(9);
        std::normal_distribution<double> n01(0.0, 1.0);
        Matrix pts(30, 2);
        for (int i = 0; i < 30; ++i)
            for (int d = 0; d < 2; ++d) pts(i, d) = n01(g);
        std::vector<int> a = cluster_rows(pts, 4, ClusterMethod::KMeans, 3);
        Matrix centroids = Matrix::Zero(4, 2);
        Eigen::VectorXd sizes = Eigen::VectorXd::Zero(4);
        for (int i = 0; i < 30; ++i) {
            centroids.row(a[i]) += pts.row(i);
            sizes[a[i]] += 1.0;
        }
        for (int c = 0; c < 4; ++c)
            if (sizes[c] > 0) centroids.row(c) /= sizes[c];
        for (int i = 0; i < 30; ++i) {
            double own = (pts.row(i) - centroids.row(a[i])).squaredNorm();
            for (int c = 0; c < 4; ++c)
                if (sizes[c] > 0) CHECK(own <= (pts.row(i) - centroids.row(c)).squaredNorm() + 1e-12);
        }
    }
}

TEST_CASE("cluster_accounts clusters the embedding rows") {
    ModelConfig cfg = small_config(6);
    ModelParams p = init_model(cfg, {random_sequence(5, 6, 1)}, 2);
    // plant separation directly in W_e
    for (int i = 0; i < 6; ++i) p.enc.W_e.row(i).setConstant(i < 3 ? 4.0 : -4.0);
    std::vector<int> a = cluster_accounts(p, 2, ClusterMethod::KMeans, 5);
    CHECK(a[0] == a[1]);
    CHECK(a[1] == a[2]);
    CHECK(a[3] == a[4]);
    CHECK(a[4] == a[5]);
    CHECK(a[0] != a[3]);
}

TEST_CASE("flag_coordinated") {
    SUBCASE("picks the cluster with the higher intra mean") {
        InfluenceMatrix infl = make_influence(4);
        std::vector<int> assign = {0, 0, 1, 1};
        set_entry(infl, 0, 1, 0.30);
        set_entry(infl, 1, 0, 0.30);
        set_entry(infl, 2, 3, 0.05);
        set_entry(infl, 3, 2, 0.05);
        std::vector<int> flags = flag_coordinated(assign, infl);
        CHECK(flags == std::vector<int>{1, 1, 0, 0});
    }

    SUBCASE("diagonal entries do not count as intra-cluster influence") {
        InfluenceMatrix infl = make_influence(4);
        std::vector<int> assign = {0, 0, 1, 1};
        set_entry(infl, 0, 0, 0.99);
        set_entry(infl, 1, 1, 0.99);
        set_entry(infl, 0, 1, 0.05);
        set_entry(infl, 2, 3, 0.20);
        std::vector<int> flags = flag_coordinated(assign, infl);
        CHECK(flags == std::vector<int>{0, 0, 1, 1});
    }

    SUBCASE("equal means tie-break toward the smaller cluster") {
        InfluenceMatrix infl = make_influence(6);
        std::vector<int> assign = {0, 0, 1, 1, 1, 1};
        set_entry(infl, 0, 1, 0.2);
        set_entry(infl, 2, 3, 0.2);
        set_entry(infl, 4, 5, 0.2);
        std::vector<int> flags = flag_coordinated(assign, infl);
        CHECK(flags == std::vector<int>{1, 1, 0, 0, 0, 0});
    }

    SUBCASE("invariant under relabeling of cluster ids") {
        InfluenceMatrix infl = make_influence(5);
        std::vector<int> assign = {0, 0, 1, 1, 1};
        set_entry(infl, 0, 1, 0.4);
        set_entry(infl, 3, 2, 0.1);
        std::vector<int> relabeled = {2, 2, 0, 0, 0};
        CHECK(flag_coordinated(assign, infl) == flag_coordinated(relabeled, infl));
    }

    SUBCASE("clusters with no present intra entries are skipped") {
        InfluenceMatrix infl = make_influence(4);
        std::vector<int> assign = {0, 0, 1, 1};
        set_entry(infl, 2, 3, 0.01);  // cluster 0 has no observed intra influence
        std::vector<int> flags = flag_coordinated(assign, infl);
        CHECK(flags == std::vector<int>{0, 0, 1, 1});
    }

    SUBCASE("no measurable cluster at all is an error") {
        InfluenceMatrix infl = make_influence(2);
        std::vector<int> assign = {0, 1};
        CHECK_THROWS_AS(flag_coordinated(assign, infl), std::runtime_error);
    }
}

TEST_CASE("anomaly_scores average influence with the flagged set in both directions") {
    InfluenceMatrix infl = make_influence(3);
    std::vector<int> flagged = {1, 1, 0};
    set_entry(infl, 0, 1, 0.6);
    set_entry(infl, 1, 0, 0.2);
    set_entry(infl, 2, 0, 0.1);
    std::vector<double> s = anomaly_scores(flagged, infl);
    // account 0: present entries with flagged others = {(0<-1)=0.6, (1<-0)=0.2}
    CHECK(s[0] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(s[1] == doctest::Approx(0.4).epsilon(1e-12));
    // account 2: only (2<-0)=0.1 present against the flagged set
    CHECK(s[2] == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("supervised_scores") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> noise(0.0, 1.0);
    const int n = 200;
    Matrix emb(n, 4);
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) {
        labels[i] = i < 40 ? 1 : 0;
        for (int d = 0; d < 4; ++d) emb(i, d) = noise(rng) + (labels[i] ? 2.0 : -2.0);
    }

    SUBCASE("separable labels give near-perfect out-of-fold AUC") {
        std::vector<double> s = supervised_scores(emb, labels, 5, 1);
        DetectionMetrics m = detection_metrics(s, labels, labels);
        CHECK(m.auc >= 0.95);
    }

    SUBCASE("permuted labels are chance level") {
        std::vector<int> shuffled = labels;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        std::vector<double> s = supervised_scores(emb, shuffled, 5, 1);
        DetectionMetrics m = detection_metrics(s, shuffled, shuffled);
        CHECK(m.auc == doctest::Approx(0.5).epsilon(0.2));
    }

    SUBCASE("unlabeled accounts come back NaN") {
        std::vector<int> partial = labels;
        partial[10] = -1;
        std::vector<double> s = supervised_scores(emb, partial, 5, 1);
        CHECK(std::isnan(s[10]));
        CHECK_FALSE(std::isnan(s[0]));
    }

    SUBCASE("parameter errors") {
        CHECK_THROWS_AS(supervised_scores(emb, labels, 1, 0), std::invalid_argument);
        std::vector<int> ones(n, 1);
        CHECK_THROWS_AS(supervised_scores(emb, ones, 5, 0), std::invalid_argument);
    }
}

TEST_CASE("detection_metrics") {
    SUBCASE("perfect separation") {
        std::vector<double> s = {0.9, 0.8, 0.1, 0.2};
        std::vector<int> y = {1, 1, 0, 0};
        DetectionMetrics m = detection_metrics(s, y, y);
        CHECK(m.auc == 1.0);
        CHECK(m.ap == 1.0);
        CHECK(m.max_f1 == 1.0);
        CHECK(m.f1 == 1.0);
        CHECK(m.precision == 1.0);
        CHECK(m.recall == 1.0);
        CHECK(m.macro_f1 == 1.0);
    }

    SUBCASE("one concordant and one discordant pair gives AUC one half") {
        std::vector<double> s = {0.8, 0.4, 0.6};
        std::vector<int> y = {1, 1, 0};
        DetectionMetrics m = detection_metrics(s, {1, 1, 0}, y);
        CHECK(m.auc == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("random scores match brute-force oracles") {
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::bernoulli_distribution lab(0.3);
        for (int trial = 0; trial < 10; ++trial) {
            const int n = 60;
            std::vector<double> s(n);
            std::vector<int> y(n);
            int pos = 0;
            for (int i = 0; i < n; ++i) {
                s[i] = std::round(u(rng) * 10.0) / 10.0;  // force some ties
                y[i] = lab(rng) ? 1 : 0;
                pos += y[i];
            }
            if (pos == 0 || pos == n) continue;
            std::vector<int> flags(n);
            for (int i = 0; i < n; ++i) flags[i] = s[i] > 0.5 ? 1 : 0;
            DetectionMetrics m = detection_metrics(s, flags, y);

            CHECK(m.auc == doctest::Approx(auc_oracle(s, y)).epsilon(1e-10));
            CHECK(m.f1 == doctest::Approx(f1_at(flags, y)).epsilon(1e-12));

            // MaxF1 oracle: sweep every distinct score as a threshold
            double best = 0.0;
            for (double th : s) {
                std::vector<int> pred(n);
                for (int i = 0; i < n; ++i) pred[i] = s[i] >= th ? 1 : 0;
                best = std::max(best, f1_at(pred, y));
            }
            CHECK(m.max_f1 == doctest::Approx(best).epsilon(1e-10));
            CHECK(m.max_f1 >= m.f1 - 1e-12);

            // AP oracle: precision at each positive in descending-score order,
            // grouping tied scores
            std::vector<int> idx(n);
            std::iota(idx.begin(), idx.end(), 0);
            std::stable_sort(idx.begin(), idx.end(),
                             [&](int a, int b) { return s[a] > s[b]; });
            double ap = 0.0, tp = 0.0, fp = 0.0, prev_rec = 0.0;
            std::size_t i = 0;
            while (i < idx.size()) {
                std::size_t j = i;
                while (j < idx.size() && s[idx[j]] == s[idx[i]]) j++;
                for (std::size_t k = i; k < j; ++k) (y[idx[k]] ? tp : fp) += 1.0;
                double rec = tp / pos, prec = tp / (tp + fp);
                ap += (rec - prev_rec) * prec;
                prev_rec = rec;
                i = j;
            }
            CHECK(m.ap == doctest::Approx(ap).epsilon(1e-10));

            // monotone transforms leave ranking metrics alone
            std::vector<double> warped(n);
            for (int q = 0; q < n; ++q) warped[q] = std::exp(3.0 * s[q]) + 1.0;
            DetectionMetrics w = detection_metrics(warped, flags, y);
            CHECK(w.auc == doctest::Approx(m.auc).epsilon(1e-10));
            CHECK(w.ap == doctest::Approx(m.ap).epsilon(1e-10));

            // macro oracle
            std::vector<int> flipped_pred(n), flipped_y(n);
            for (int q = 0; q < n; ++q) {
                flipped_pred[q] = 1 - flags[q];
                flipped_y[q] = 1 - y[q];
            }
            double macro = 0.5 * (f1_at(flags, y) + f1_at(flipped_pred, flipped_y));
            CHECK(m.macro_f1 == doctest::Approx(macro).epsilon(1e-10));
        }
    }

    SUBCASE("contract violations") {
        CHECK_THROWS_AS(detection_metrics({0.5}, {1}, {1, 0}), std::invalid_argument);
        CHECK_THROWS_AS(detection_metrics({0.5, 0.6}, {1, 1}, {1, 1}), std::invalid_argument);
    }
}

TEST_CASE("pagerank_influence") {
    SUBCASE("two accounts with symmetric weights split evenly") {
        InfluenceMatrix infl = make_influence(2);
        set_entry(infl, 0, 1, 0.5);
        set_entry(infl, 1, 0, 0.5);
        PageRankResult r = pagerank_influence(infl);
        CHECK(r.scores[0] == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(r.scores[1] == doctest::Approx(0.5).epsilon(1e-9));
    }

    SUBCASE("star graph: the hub wins") {
        InfluenceMatrix infl = make_influence(6);
        for (int u = 1; u < 6; ++u) set_entry(infl, 0, u, 1.0);
        PageRankResult r = pagerank_influence(infl);
        CHECK(r.ranking[0] == 0);
        for (int i = 1; i < 6; ++i) CHECK(r.scores[0] > r.scores[i]);
    }

    SUBCASE("random graph matches a dense linear solve") {
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const int n = 10;
        InfluenceMatrix infl = make_influence(n);
        for (int v = 0; v < n; ++v)
            for (int w = 0; w < n; ++w)
                if (u(rng) < 0.4) set_entry(infl, v, w, 0.1 + u(rng));
        PageRankResult r = pagerank_influence(infl, 0.85);

        Matrix P = Matrix::Zero(n, n);
        for (int col = 0; col < n; ++col) {
            double colsum = 0.0;
            for (int row = 0; row < n; ++row)
                if (infl.present(row, col)) colsum += infl.values(row, col);
            if (colsum > 0)
                for (int row = 0; row < n; ++row)
                    if (infl.present(row, col)) P(row, col) = infl.values(row, col) / colsum;
                    else P(row, col) = 0.0;
            else
                P.col(col).setConstant(1.0 / n);
        }
        Matrix M = 0.85 * P + (0.15 / n) * Matrix::Ones(n, n);
        Matrix A = Matrix::Identity(n, n) - M + Matrix::Ones(n, n) / n;
        Vector rhs = Vector::Ones(n) / n;
        Vector exact = A.colPivHouseholderQr().solve(rhs);
        exact /= exact.sum();
        CHECK((r.scores - exact).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(r.scores.minCoeff() >= 0.0);
        CHECK(r.scores.sum() == doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("top_k truncates the ranking only") {
        InfluenceMatrix infl = make_influence(5);
        for (int v = 0; v < 5; ++v)
            for (int w = 0; w < 5; ++w)
                if (v != w) set_entry(infl, v, w, 1.0 + v);
        PageRankResult r = pagerank_influence(infl, 0.85, 2);
        CHECK(r.ranking.size() == 2);
        CHECK(r.scores.size() == 5);
    }

    SUBCASE("damping out of range") {
        InfluenceMatrix infl = make_influence(2);
        set_entry(infl, 0, 1, 1.0);
        CHECK_THROWS_AS(pagerank_influence(infl, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(pagerank_influence(infl, 0.0), std::invalid_argument);
    }
}

TEST_CASE("write_influence_csv emits values with gaps and a counts sidecar") {
    InfluenceMatrix infl = make_influence(2);
    set_entry(infl, 0, 1, 0.25);
    AccountVocabulary vocab;
    vocab.add("a");
    vocab.add("b");
    std::string vp = "/tmp/amdn_test_infl_values.csv", cp = "/tmp/amdn_test_infl_counts.csv";
    write_influence_csv(infl, vocab, vp, cp);
    std::ifstream vin(vp);
    std::string header, row0, row1;
    std::getline(vin, header);
    std::getline(vin, row0);
    std::getline(vin, row1);
    CHECK(header == "account,a,b");
    CHECK(row0.substr(0, 3) == "a,,");  // missing (0,0), then the 0.25 entry
    CHECK(row0.find("0.25") != std::string::npos);
    CHECK(row1 == "b,,");
    std::ifstream cin_(cp);
    std::getline(cin_, header);
    std::getline(cin_, row0);
    CHECK(header == "account,a,b");
    CHECK(row0 == "a,0,1");
    std::remove(vp.c_str());
    std::remove(cp.c_str());
}
