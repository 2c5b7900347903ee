#pragma once

// Convex polygon helpers shared by the d = 2 envelope code.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

namespace bco::detail {

using Pt2 = Eigen::Vector2d;
using Poly2 = std::vector<Pt2>;

/// Keeps { p : <n, p> <= c + tol } of a convex polygon in vertex order.
inline Poly2 clip(const Poly2& poly, const Pt2& n, double c, double tol) {
    Poly2 out;
    const std::size_t m = poly.size();
    if (m == 0) {
        return out;
    }
    out.reserve(m + 1);
    for (std::size_t i = 0; i < m; ++i) {
        const Pt2& p = poly[i];
        const Pt2& q = poly[(i + 1) % m];
        const double sp = n.dot(p) - c;
        const double sq = n.dot(q) - c;
        const bool in_p = sp <= tol;
        const bool in_q = sq <= tol;
        if (in_p) {
            out.push_back(p);
        }
        if (m > 1 && in_p != in_q && std::abs(sp - sq) > 0.0) {
            const double t = sp / (sp - sq);
            if (t > 0.0 && t < 1.0) {
                out.push_back(p + t * (q - p));
            }
        }
    }
    // Drop consecutive near-duplicates.
    Poly2 dedup;
    dedup.reserve(out.size());
    for (const auto& p : out) {
        if (dedup.empty() || (p - dedup.back()).cwiseAbs().maxCoeff() > tol) {
            dedup.push_back(p);
        }
    }
    while (dedup.size() > 1 && (dedup.front() - dedup.back()).cwiseAbs().maxCoeff() <= tol) {
        dedup.pop_back();
    }
    return dedup;
}

inline double area(const Poly2& poly) {
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Pt2& p = poly[i];
        const Pt2& q = poly[(i + 1) % poly.size()];
        a += p.x() * q.y() - p.y() * q.x();
    }
    return 0.5 * a;
}

/// Counter-clockwise vertex order of a convex point set (by angle about the centroid).
inline Poly2 ccw_order(Poly2 pts) {
    if (pts.size() < 3) {
        return pts;
    }
    Pt2 c = Pt2::Zero();
    for (const auto& p : pts) {
        c += p;
    }
    c /= static_cast<double>(pts.size());
    std::sort(pts.begin(), pts.end(), [&c](const Pt2& a, const Pt2& b) {
        return std::atan2(a.y() - c.y(), a.x() - c.x()) < std::atan2(b.y() - c.y(), b.x() - c.x());
    });
    return pts;
}

}  // namespace bco::detail
