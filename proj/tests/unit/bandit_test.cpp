#include <cmath>
#include <random>

#include "bco/error.hpp"
#include "bco/exp3p.hpp"
#include "doctest.h"

using namespace bco;

TEST_CASE("exp3p: fresh state") {
    const Exp3State s(10, 0.01);
    CHECK((s.distribution() - Vec::Constant(10, 0.1)).norm() < 1e-12);
    CHECK(s.values().isZero());
    CHECK(s.widths().isZero());
}

TEST_CASE("exp3p: a single arm is always played") {
    Exp3State s(1, 0.05);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 50; ++t) {
        CHECK(s.distribution()(0) == doctest::Approx(1.0));
        s.update(s.sample(rng), 0.3);
    }
}

TEST_CASE("exp3p: initial weights are the block constant") {
    Exp3State s(3, 0.05);
    const auto& p = s.params();
    CHECK(p.block == 1);
    const double want = p.eta * p.alpha * p.gamma * std::sqrt(1.0 / 3.0);
    CHECK(p.initial_log_weight() == doctest::Approx(want));
    for (int i = 0; i < 3; ++i) {
        CHECK(s.log_weights()(i) == doctest::Approx(want));
    }
    for (int t = 0; t < 3; ++t) {
        s.update(0, 0.2);
    }
    // Round 4 opens the block of length 4, with freshly equal weights.
    const auto& q = s.params();
    CHECK(q.block == 4);
    CHECK(q.alpha == doctest::Approx(std::sqrt(std::log(3.0 * 4.0 / 0.05))));
    CHECK(q.gamma == doctest::Approx(std::min(1.0, std::sqrt(3.0 * std::log(3.0) / 4.0))));
}

TEST_CASE("exp3p: distribution follows the mixing formula") {
    Exp3State s(4, 0.05);
    std::mt19937_64 rng(2);
    for (int t = 0; t < 200; ++t) {
        const auto& lw = s.log_weights();
        const Vec w = (lw.array() - lw.maxCoeff()).exp().matrix();
        const double g = s.params().gamma;
        const Vec want = (1.0 - g) * w / w.sum() + Vec::Constant(4, g / 4.0);
        CHECK((s.distribution() - want).norm() < 1e-12);
        CHECK(s.distribution().minCoeff() >= g / 4.0 - 1e-15);
        const auto a = s.sample(rng);
        s.update(a, a == 2 ? 0.0 : 0.9);
    }
}

TEST_CASE("exp3p: importance-weighted estimates and widths") {
    Exp3State s(4, 0.05);
    s.update(2, 0.5);
    CHECK(s.values()(2) == doctest::Approx(2.0));
    CHECK(s.values()(0) == 0.0);
    CHECK(s.values()(1) == 0.0);
    const double alpha = std::sqrt(std::log(4.0 / 0.05));
    const double sigma = alpha / (0.25 * std::sqrt(4.0));
    for (int j = 0; j < 4; ++j) {
        CHECK(s.widths()(j) == doctest::Approx(sigma));
    }
    const Vec before = s.values();
    const Vec w_before = s.widths();
    s.update(1, 0.0);
    CHECK(s.values() == before);
    CHECK((s.widths().array() > w_before.array()).all());
}

TEST_CASE("exp3p: sampling matches the distribution") {
    Exp3State s(5, 0.05);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 300; ++t) {
        const auto a = s.sample(rng);
        s.update(a, a == 4 ? 0.05 : 0.8);
    }
    const Vec p = s.distribution();
    std::vector<int> hits(5, 0);
    const int n = 10'000;
    for (int i = 0; i < n; ++i) {
        ++hits[s.sample(rng)];
    }
    for (int j = 0; j < 5; ++j) {
        const double mean = n * p(j);
        const double sd = std::sqrt(n * p(j) * (1.0 - p(j)));
        CHECK(std::abs(hits[j] - mean) <= 4.0 * sd);
    }
}

TEST_CASE("exp3p: contract violations") {
    Exp3State s(2, 0.05);
    CHECK_THROWS_AS(s.update(0, 1.01), ContractViolation);
    CHECK_THROWS_AS(s.update(2, 0.5), ContractViolation);
    CHECK_THROWS_AS(Exp3State(0, 0.05), StructuralError);
    CHECK_THROWS_AS(Exp3State(2, 1.0), StructuralError);
}
