#include <random>

#include "bco/error.hpp"
#include "bco/lce.hpp"
#include "bco/rdf.hpp"
#include "doctest.h"

using namespace bco;

namespace {

Vec at(double x) { return Vec::Constant(1, x); }

Rdf rdf_1d(const std::vector<double>& xs, const std::vector<double>& v, double sigma = 0.0) {
    std::vector<Vec> pts;
    for (const double x : xs) {
        pts.push_back(at(x));
    }
    return Rdf(pts, Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())),
               Vec::Constant(static_cast<Eigen::Index>(v.size()), sigma));
}

ConvexBody interval(double lo, double hi) { return ConvexBody::box(at(lo), at(hi)); }

/// Oracle for f~_min in d = 1: scan feasible slopes h on a fine grid.
double dense_h_oracle(const Rdf& rdf, double x) {
    double best = -1e300;
    for (std::size_t i = 0; i < rdf.size(); ++i) {
        const double xi = rdf.points()[i](0);
        const double lo_i = rdf.values()(static_cast<Eigen::Index>(i)) - rdf.widths()(static_cast<Eigen::Index>(i));
        double inner = 1e300;
        bool feasible = false;
        for (int k = -4000; k <= 4000; ++k) {
            const double h = k / 1000.0;
            bool ok = true;
            for (std::size_t j = 0; j < rdf.size() && ok; ++j) {
                const auto jj = static_cast<Eigen::Index>(j);
                ok = h * (rdf.points()[j](0) - xi) <= rdf.values()(jj) + rdf.widths()(jj) - lo_i + 1e-12;
            }
            if (ok) {
                feasible = true;
                inner = std::min(inner, h * (x - xi) + lo_i);
            }
        }
        if (feasible) {
            best = std::max(best, inner);
        }
    }
    return best;
}

}  // namespace

TEST_CASE("minimal extension: single point") {
    const Rdf r = rdf_1d({0.0}, {5.0}, 1.0);
    CHECK(eval_ftilde_min(r, at(0.0)).value == doctest::Approx(4.0));
}

TEST_CASE("minimal extension: linear data is reproduced") {
    const Rdf r = rdf_1d({0, 1, 2}, {0, 1, 2});
    for (const double x : {0.0, 0.25, 0.5, 1.0, 1.5, 2.0}) {
        CHECK(eval_ftilde_min(r, at(x)).value == doctest::Approx(x));
        CHECK(dense_h_oracle(r, x) == doctest::Approx(x));
    }
}

TEST_CASE("minimal extension: V data") {
    const Rdf r = rdf_1d({0, 1, 2}, {1, 0, 1});
    CHECK(eval_ftilde_min(r, at(0.5)).value == doctest::Approx(-0.5));
    CHECK(eval_ftilde_min(r, at(1.0)).value == doctest::Approx(0.0));
    CHECK(eval_ftilde_min(r, at(0.0)).value == doctest::Approx(1.0));
    for (const double x : {0.0, 0.5, 1.0, 1.5}) {
        CHECK(eval_ftilde_min(r, at(x)).value == doctest::Approx(dense_h_oracle(r, x)));
    }
}

TEST_CASE("fit_lce: V data on [-1, 3] exposes the hidden valley") {
    const Rdf r = rdf_1d({0, 1, 2}, {1, 0, 1});
    const auto m = fit_lce_on_domain(r, interval(-1.0, 3.0));
    for (const double x : {0.0, 0.5, 1.0, 1.7, 2.0}) {
        CHECK(eval_lce(m, at(x)) == doctest::Approx(-1.0));
    }
    CHECK(eval_lce(m, at(-1.0)) == doctest::Approx(2.0));
    CHECK(eval_lce(m, at(3.0)) == doctest::Approx(2.0));
    CHECK(eval_lce(m, at(2.5)) == doctest::Approx(0.5));
    CHECK(lce_subgradient(m, at(2.5))(0) == doctest::Approx(3.0));

    // Brute-force envelope of sampled f~_min along an independent path. The
    // valleys are about 2 / h_max wide, so the mesh is refined geometrically
    // around each data point.
    std::vector<Vec> pts;
    std::vector<double> vals;
    auto sample = [&](double x) {
        pts.push_back(at(x));
        vals.push_back(eval_ftilde_min(r, pts.back(), m.h_max).value);
    };
    for (int i = 0; i <= 400; ++i) {
        sample(-1.0 + i / 100.0);
    }
    for (const double c : {0.0, 1.0, 2.0}) {
        for (double e = 0.1; e > 1e-9; e /= 2.0) {
            sample(c - e);
            sample(c + e);
        }
    }
    CHECK(brute_slce_oracle(pts, vals, at(1.0)) == doctest::Approx(-1.0).epsilon(1e-5));
    for (int i = 0; i <= 40; ++i) {
        const Vec x = at(-1.0 + i / 10.0);
        CHECK(eval_lce(m, x) == doctest::Approx(brute_slce_oracle(pts, vals, x)).epsilon(1e-4));
    }
    CHECK_THROWS_AS((void)eval_lce(m, at(3.5)), DomainError);
}

TEST_CASE("fit_lce: linear data is a fixed point") {
    const auto m = fit_lce_on_domain(rdf_1d({0, 1, 2}, {0, 1, 2}), interval(0.0, 2.0));
    for (const double x : {0.0, 0.3, 1.0, 1.9, 2.0}) {
        CHECK(eval_lce(m, at(x)) == doctest::Approx(x));
        CHECK(lce_subgradient(m, at(x))(0) == doctest::Approx(1.0));
    }
}

TEST_CASE("fit_lce: properties on random data") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> xs;
        std::vector<double> vs;
        for (int i = 0; i < 8; ++i) {
            xs.push_back(i / 7.0);
            vs.push_back(u(rng));
        }
        const Rdf r = rdf_1d(xs, vs, 0.05);
        const auto m = fit_lce(r, interval(0.0, 1.0));
        for (std::size_t i = 0; i < xs.size(); ++i) {
            // Below the upper band at every data point.
            CHECK(eval_lce(m, at(xs[i])) <= vs[i] + 0.05 + 1e-9);
        }
        // Vertices of the epigraph are attained at the domain corners.
        CHECK(eval_lce(m, at(0.0)) == doctest::Approx(eval_ftilde_min(r, at(0.0), m.h_max).value));
        for (int k = 0; k < 1000; ++k) {
            const Vec p = at(u(rng));
            const Vec q = at(u(rng));
            CHECK(eval_lce(m, 0.5 * (p + q)) <= 0.5 * (eval_lce(m, p) + eval_lce(m, q)) + 1e-9);
            const Vec g = lce_subgradient(m, p);
            CHECK(eval_lce(m, q) >= eval_lce(m, p) + g.dot(q - p) - 1e-9);
        }
    }
}

TEST_CASE("brute_slce_oracle on sampled functions") {
    std::vector<Vec> pts;
    std::vector<double> sq;
    std::vector<double> kink;
    for (int i = 0; i <= 200; ++i) {
        const double x = -1.0 + i / 100.0;
        pts.push_back(at(x));
        sq.push_back(x * x);
        kink.push_back(std::abs(x) - 1.0);
    }
    CHECK(std::abs(brute_slce_oracle(pts, sq, at(0.0))) < 1e-4);
    CHECK(brute_slce_oracle(pts, kink, at(0.0)) == doctest::Approx(-1.0));
    CHECK_THROWS_AS((void)brute_slce_oracle(pts, sq, at(1.5)), DomainError);
}

TEST_CASE("fit_lce in two dimensions reproduces exact convex data") {
    std::vector<Vec> pts;
    std::vector<double> v;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            pts.push_back(Vec{{double(i), double(j)}});
            v.push_back(0.5 * i + 0.25 * j);
        }
    }
    const Rdf r(pts, Eigen::Map<const Vec>(v.data(), 9), Vec::Zero(9));
    const auto m = fit_lce_on_domain(r, ConvexBody::box(Vec::Zero(2), Vec::Constant(2, 2.0)));
    for (int k = 0; k <= 10; ++k) {
        const Vec x{{0.2 * k, 2.0 - 0.2 * k}};
        CHECK(eval_lce(m, x) == doctest::Approx(0.5 * x(0) + 0.25 * x(1)));
    }
}
