#include <doctest.h>

#include <random>

#include "test_helpers.hpp"

using namespace amdn;
using namespace amdn::testing;

TEST_CASE("positional encoding basics") {
    Vector pe0 = positional_encoding(0, 4);
    CHECK(pe0[0] == 0.0);
    CHECK(pe0[1] == 1.0);
    CHECK(pe0[2] == 0.0);
    CHECK(pe0[3] == 1.0);

    Vector pe1 = positional_encoding(1, 2);
    CHECK(pe1[0] == doctest::Approx(std::sin(1.0)).epsilon(1e-12));
    CHECK(pe1[1] == doctest::Approx(std::cos(1.0)).epsilon(1e-12));
}

TEST_CASE("positional encodings are distinct for p != q below 128") {
    for (int p = 0; p < 128; p += 7) {
        for (int q = p + 1; q < 128; q += 13) {
            Vector a = positional_encoding(p, 16), b = positional_encoding(q, 16);
            CHECK((a - b).norm() > 1e-9);
        }
    }
}

TEST_CASE("temporal encoding at zero gap: cosine slots carry the coefficients, sine slots vanish") {
    ModelConfig cfg = small_config();
    cfg.m_t = 5;
    ModelParams p = init_model(cfg, {random_sequence(4, cfg.vocab_size, 1)}, 0);
    Vector phi0 = temporal_encoding(0.0, p.enc, cfg);
    // slots: [const, cos, sin, cos, sin]; sin slots are zero at dt = 0
    CHECK(phi0[2] == 0.0);
    CHECK(phi0[4] == 0.0);
    double c = p.enc.temporal_coeff(0, 0);
    CHECK(phi0[0] == doctest::Approx(c * cfg.num_freqs));
    CHECK(phi0[1] == doctest::Approx(c * cfg.num_freqs));
}

TEST_CASE("temporal encoding is periodic per frequency: dt = 2*omega equals dt = 0") {
    ModelConfig cfg = small_config();
    cfg.num_freqs = 1;
    cfg.m_t = 6;
    ModelParams p = init_model(cfg, {random_sequence(4, cfg.vocab_size, 2)}, 0);
    double omega = p.enc.freqs[0];
    Vector a = temporal_encoding(0.0, p.enc, cfg);
    Vector b = temporal_encoding(2.0 * omega, p.enc, cfg);
    CHECK((a - b).norm() < 1e-9);
}

TEST_CASE("per-frequency feature dot products depend only on the time difference") {
    // with tied coefficients (the uniform init) cos/sin pairs reduce to
    // cos(j pi (t1 - t2) / omega)
    ModelConfig cfg = small_config();
    cfg.num_freqs = 1;
    cfg.m_t = 5;
    ModelParams p = init_model(cfg, {random_sequence(4, cfg.vocab_size, 3)}, 0);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> t(0.0, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        double t1 = t(rng), t2 = t(rng), shift = t(rng);
        double d1 = temporal_encoding(t1, p.enc, cfg).dot(temporal_encoding(t2, p.enc, cfg));
        double d2 = temporal_encoding(t1 + shift, p.enc, cfg)
                        .dot(temporal_encoding(t2 + shift, p.enc, cfg));
        CHECK(d1 == doctest::Approx(d2).epsilon(1e-9));
    }
}

TEST_CASE("temporal encoding is parameter-dependent, positional encoding is not") {
    ModelConfig cfg = small_config();
    ModelParams a = init_model(cfg, {random_sequence(4, cfg.vocab_size, 4)}, 0);
    ModelParams b = a;
    b.enc.temporal_coeff.array() += 0.5;
    CHECK((temporal_encoding(1.0, a.enc, cfg) - temporal_encoding(1.0, b.enc, cfg)).norm() > 1e-9);
}

TEST_CASE("embed_sequence layout") {
    ModelConfig cfg = small_config();
    auto seq = random_sequence(6, cfg.vocab_size, 5);
    ModelParams p = init_model(cfg, {seq}, 0);

    SUBCASE("single event: temporal slice equals phi(0)") {
        IndexedSequence one;
        one.id = "one";
        one.accounts = {1};
        one.times = {3.0};
        Matrix X = embed_sequence(one, p.enc, cfg);
        CHECK(X.rows() == 1);
        Vector phi0 = temporal_encoding(0.0, p.enc, cfg);
        CHECK((X.row(0).segment(cfg.m_e + cfg.m_p, cfg.m_t).transpose() - phi0).norm() == 0.0);
    }

    SUBCASE("same account at the same time: rows differ only in the positional slice") {
        IndexedSequence two;
        two.id = "two";
        two.accounts = {2, 2};
        two.times = {1.0, 1.0};
        Matrix X = embed_sequence(two, p.enc, cfg);
        CHECK((X.row(0).segment(0, cfg.m_e) - X.row(1).segment(0, cfg.m_e)).norm() == 0.0);
        // dt is 0 for both rows (first-event convention and the tie)
        CHECK((X.row(0).tail(cfg.m_t) - X.row(1).tail(cfg.m_t)).norm() == 0.0);
        CHECK((X.row(0).segment(cfg.m_e, cfg.m_p) - X.row(1).segment(cfg.m_e, cfg.m_p)).norm() > 0.0);
    }

    SUBCASE("embedding slice matches iff accounts match") {
        Matrix X = embed_sequence(seq, p.enc, cfg);
        for (int i = 0; i < 6; ++i)
            for (int k = 0; k < 6; ++k) {
                bool same = (X.row(i).segment(0, cfg.m_e) - X.row(k).segment(0, cfg.m_e)).norm() < 1e-12;
                CHECK(same == (seq.accounts[i] == seq.accounts[k]));
            }
    }

    SUBCASE("unknown account index throws") {
        IndexedSequence bad;
        bad.id = "bad";
        bad.accounts = {cfg.vocab_size};
        bad.times = {0.0};
        CHECK_THROWS_AS(embed_sequence(bad, p.enc, cfg), std::runtime_error);
    }
}

TEST_CASE("masked self-attention") {
    ModelConfig cfg = small_config();
    auto seq = random_sequence(6, cfg.vocab_size, 6);
    ModelParams p = init_model(cfg, {seq}, 1);

    SUBCASE("L=1 gives A = [[1]]") {
        IndexedSequence one;
        one.id = "one";
        one.accounts = {0};
        one.times = {0.0};
        EncodedSequence e = encode(one, p.enc, cfg);
        CHECK(e.attention(0, 0) == doctest::Approx(1.0));
    }

    SUBCASE("zero query weights give uniform rows 1/(i+1)") {
        ModelParams z = p;
        z.enc.W_q.setZero();
        EncodedSequence e = encode(seq, z.enc, cfg);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j <= i; ++j)
                CHECK(e.attention(i, j) == doctest::Approx(1.0 / (i + 1)).epsilon(1e-12));
    }

    SUBCASE("rows are probability vectors and strictly lower-triangular above the diagonal") {
        EncodedSequence e = encode(seq, p.enc, cfg);
        for (int i = 0; i < 6; ++i) {
            double row_sum = 0.0;
            for (int j = 0; j < 6; ++j) {
                if (j > i) CHECK(e.attention(i, j) == 0.0);
                CHECK(e.attention(i, j) >= 0.0);
                row_sum += e.attention(i, j);
            }
            CHECK(row_sum == doctest::Approx(1.0).epsilon(1e-6));
        }
    }

    SUBCASE("causality: perturbing a suffix leaves earlier contexts bit-unchanged") {
        EncodedSequence base = encode(seq, p.enc, cfg);
        IndexedSequence pert = seq;
        int k = 3;
        pert.accounts[k] = (pert.accounts[k] + 1) % cfg.vocab_size;
        pert.times[k] += 0.37;
        pert.times[4] += 0.37;
        pert.times[5] += 0.37;
        EncodedSequence mod = encode(pert, p.enc, cfg);
        for (int i = 0; i < k; ++i)
            CHECK((base.contexts.row(i) - mod.contexts.row(i)).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("non-finite input is rejected") {
        Matrix X = Matrix::Zero(2, cfg.d());
        X(1, 0) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(masked_self_attention(X, p.enc, cfg), std::runtime_error);
    }
}

TEST_CASE("encode determinism and dropout semantics") {
    ModelConfig cfg = small_config();
    auto seq = random_sequence(8, cfg.vocab_size, 7);
    ModelParams p = init_model(cfg, {seq}, 2);

    SUBCASE("evaluation mode is bit-deterministic") {
        EncodedSequence a = encode(seq, p.enc, cfg, false);
        EncodedSequence b = encode(seq, p.enc, cfg, false);
        CHECK((a.contexts - b.contexts).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.attention - b.attention).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("train mode with dropout 0 equals evaluation mode") {
        ModelConfig c0 = cfg;
        c0.dropout = 0.0;
        EncodedSequence a = encode(seq, p.enc, c0, true, 99);
        EncodedSequence b = encode(seq, p.enc, c0, false);
        CHECK((a.contexts - b.contexts).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("train mode with dropout differs from evaluation mode") {
        ModelConfig c1 = cfg;
        c1.dropout = 0.5;
        EncodedSequence a = encode(seq, p.enc, c1, true, 99);
        EncodedSequence b = encode(seq, p.enc, c1, false);
        CHECK((a.contexts - b.contexts).cwiseAbs().maxCoeff() > 0.0);
    }

    SUBCASE("shape contract at L = 128") {
        auto long_seq = random_sequence(128, cfg.vocab_size, 8);
        EncodedSequence e = encode(long_seq, p.enc, cfg);
        CHECK(e.contexts.rows() == 128);
        CHECK(e.contexts.cols() == cfg.d());
        CHECK(e.attention.rows() == 128);
        CHECK(e.attention(0, 127) == 0.0);
    }
}

TEST_CASE("recurrent summarizer produces causal contexts too") {
    ModelConfig cfg = small_config();
    cfg.summarizer = Summarizer::Recurrent;
    auto seq = random_sequence(6, cfg.vocab_size, 9);
    ModelParams p = init_model(cfg, {seq}, 3);
    EncodedSequence base = encode(seq, p.enc, cfg);
    IndexedSequence pert = seq;
    pert.accounts[5] = (pert.accounts[5] + 1) % cfg.vocab_size;
    EncodedSequence mod = encode(pert, p.enc, cfg);
    for (int i = 0; i < 5; ++i)
        CHECK((base.contexts.row(i) - mod.contexts.row(i)).cwiseAbs().maxCoeff() == 0.0);
}
