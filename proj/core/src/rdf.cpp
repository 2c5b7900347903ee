#include "bco/rdf.hpp"

#include <algorithm>
#include <cmath>

#include "bco/error.hpp"
#include "bco/lp.hpp"
#include "polygon.hpp"

namespace bco {

Rdf::Rdf(std::vector<Vec> points, Vec values, Vec widths)
    : points_(std::move(points)), values_(std::move(values)), widths_(std::move(widths)) {
    const auto k = static_cast<Eigen::Index>(points_.size());
    if (values_.size() != k || widths_.size() != k) {
        throw StructuralError("Rdf: |X|, |v| and |sigma| differ");
    }
    for (const auto& p : points_) {
        if (p.size() != points_.front().size()) {
            throw StructuralError("Rdf: points of mixed dimension");
        }
    }
    if (k > 0 && (widths_.array() < 0.0).any()) {
        throw StructuralError("Rdf: negative sigma");
    }
    if (!values_.allFinite() || !widths_.allFinite()) {
        throw StructuralError("Rdf: non-finite value or sigma");
    }
}

double Rdf::band_range() const {
    if (points_.empty()) {
        return 0.0;
    }
    return (values_ + widths_).maxCoeff() - (values_ - widths_).minCoeff();
}

double Rdf::min_spacing() const {
    double best = kInf;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        for (std::size_t j = i + 1; j < points_.size(); ++j) {
            const double dist = (points_[i] - points_[j]).norm();
            if (dist > 0.0) {
                best = std::min(best, dist);
            }
        }
    }
    return std::isfinite(best) ? best : 0.0;
}

double default_h_max(const Rdf& rdf) {
    double range = rdf.band_range();
    double spacing = rdf.min_spacing();
    if (!(range > 0.0)) {
        range = 1.0;
    }
    if (!(spacing > 0.0)) {
        spacing = 1.0;
    }
    return 1e6 * range / spacing;
}

ExtensionValue eval_ftilde_min(const Rdf& rdf, const Vec& x, double h_max) {
    if (rdf.size() == 0) {
        throw StructuralError("eval_ftilde_min: empty rdf");
    }
    const Eigen::Index d = rdf.dim();
    if (x.size() != d) {
        throw StructuralError("eval_ftilde_min: dimension mismatch");
    }
    const double big = h_max > 0.0 ? h_max : default_h_max(rdf);
    const auto k = static_cast<Eigen::Index>(rdf.size());
    const auto& pts = rdf.points();
    const Vec& v = rdf.values();
    const Vec& s = rdf.widths();

    LpProblem lp;
    lp.a_ub.resize(k, d);
    lp.b_ub.resize(k);
    lp.lower = Vec::Constant(d, -big);
    lp.upper = Vec::Constant(d, big);

    ExtensionValue out;
    out.value = -kInf;
    for (Eigen::Index i = 0; i < k; ++i) {
        const double base = v(i) - s(i);
        for (Eigen::Index j = 0; j < k; ++j) {
            lp.a_ub.row(j) = (pts[j] - pts[i]).transpose();
            lp.b_ub(j) = v(j) + s(j) - base;
        }
        lp.objective = x - pts[i];
        const auto res = solve_lp(lp);
        if (res.status != LpStatus::Optimal) {
            ++out.dropped;
            continue;
        }
        const double val = base + res.value;
        if (val > out.value) {
            out.value = val;
            out.argmax = static_cast<std::size_t>(i);
            out.clamped = (res.x.cwiseAbs().array() >= big * (1.0 - 1e-9)).any();
        }
    }
    if (out.dropped == rdf.size()) {
        throw InconsistentData("eval_ftilde_min: no index admits a consistent slope");
    }
    return out;
}

std::vector<std::optional<std::pair<double, double>>> slope_intervals(const Rdf& rdf,
                                                                       double h_max) {
    if (rdf.dim() != 1) {
        throw StructuralError("slope_intervals: rdf must be one-dimensional");
    }
    const std::size_t k = rdf.size();
    const auto& pts = rdf.points();
    const Vec& v = rdf.values();
    const Vec& s = rdf.widths();
    std::vector<std::optional<std::pair<double, double>>> out(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double base = v(ii) - s(ii);
        double lo = -h_max;
        double hi = h_max;
        bool ok = true;
        for (std::size_t j = 0; j < k && ok; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            const double dx = pts[j](0) - pts[i](0);
            const double r = v(jj) + s(jj) - base;
            if (dx > 0.0) {
                hi = std::min(hi, r / dx);
            } else if (dx < 0.0) {
                lo = std::max(lo, r / dx);
            } else if (r < -1e-12 * (1.0 + std::abs(base))) {
                ok = false;
            }
        }
        const double tol = 1e-12 * (1.0 + std::abs(lo) + std::abs(hi));
        if (!ok || lo > hi + tol) {
            continue;
        }
        if (lo > hi) {
            lo = hi = 0.5 * (lo + hi);
        }
        out[i] = std::make_pair(lo, hi);
    }
    return out;
}

std::vector<std::optional<std::vector<Eigen::Vector2d>>> slope_polygons(const Rdf& rdf,
                                                                         double h_max) {
    if (rdf.dim() != 2) {
        throw StructuralError("slope_polygons: rdf must be two-dimensional");
    }
    const std::size_t k = rdf.size();
    const auto& pts = rdf.points();
    const Vec& v = rdf.values();
    const Vec& s = rdf.widths();
    const double tol = 1e-11 * h_max;
    const detail::Poly2 square = {{-h_max, -h_max}, {h_max, -h_max}, {h_max, h_max}, {-h_max, h_max}};
    std::vector<std::optional<std::vector<Eigen::Vector2d>>> out(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double base = v(ii) - s(ii);
        detail::Poly2 poly = square;
        for (std::size_t j = 0; j < k && !poly.empty(); ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            const Eigen::Vector2d n = pts[j] - pts[i];
            const double r = v(jj) + s(jj) - base;
            const double len = n.norm();
            if (len == 0.0) {
                if (r < -1e-12 * (1.0 + std::abs(base))) {
                    poly.clear();
                }
                continue;
            }
            poly = detail::clip(poly, n / len, r / len, tol);
        }
        if (!poly.empty()) {
            out[i] = std::move(poly);
        }
    }
    return out;
}

}  // namespace bco
