#include "bco/convex_body.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bco/error.hpp"
#include "bco/lp.hpp"

namespace bco {

namespace {

void next_combination_or_done(std::vector<int>& idx, int n, bool& done) {
    const int k = static_cast<int>(idx.size());
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) {
        --i;
    }
    if (i < 0) {
        done = true;
        return;
    }
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

std::vector<Vec> unit_directions(Eigen::Index d) {
    std::vector<Vec> dirs;
    const int n = ellipsoid_facets(d);
    if (d == 1) {
        dirs.push_back(Vec::Constant(1, 1.0));
        dirs.push_back(Vec::Constant(1, -1.0));
    } else if (d == 2) {
        for (int j = 0; j < n; ++j) {
            const double t = 2.0 * std::numbers::pi * j / n;
            Vec u(2);
            u << std::cos(t), std::sin(t);
            dirs.push_back(u);
        }
    } else {
        // Fibonacci sphere plus the coordinate axes.
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int j = 0; j < n; ++j) {
            const double z = 1.0 - 2.0 * (j + 0.5) / n;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            Vec u = Vec::Zero(d);
            u(0) = r * std::cos(golden * j);
            u(1) = r * std::sin(golden * j);
            u(2) = z;
            dirs.push_back(u);
        }
        for (Eigen::Index k = 0; k < d; ++k) {
            dirs.push_back(Vec::Unit(d, k));
            dirs.push_back(-Vec::Unit(d, k));
        }
    }
    return dirs;
}

}  // namespace

int ellipsoid_facets(Eigen::Index d) {
    if (d <= 1) {
        return 2;
    }
    return d == 2 ? 64 : 60;
}

std::vector<Vec> polytope_vertices(const Mat& normals, const Vec& offsets) {
    const Eigen::Index d = normals.cols();
    if (d > 3) {
        throw Unsupported("polytope_vertices: only d <= 3 is supported");
    }
    if (normals.rows() != offsets.size()) {
        throw StructuralError("polytope_vertices: normals/offsets size mismatch");
    }
    const auto m = static_cast<int>(offsets.size());
    std::vector<Vec> out;
    if (m < d || d == 0) {
        return out;
    }
    const double scale = std::max(1.0, offsets.cwiseAbs().maxCoeff());
    std::vector<int> idx(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) {
        idx[static_cast<std::size_t>(i)] = static_cast<int>(i);
    }
    bool done = false;
    Mat a(d, d);
    Vec rhs(d);
    while (!done) {
        for (Eigen::Index i = 0; i < d; ++i) {
            const auto r = idx[static_cast<std::size_t>(i)];
            a.row(i) = normals.row(r);
            rhs(i) = offsets(r);
        }
        const Eigen::FullPivLU<Mat> lu(a);
        if (lu.rank() == d) {
            const Vec x = lu.solve(rhs);
            const double xs = std::max(scale, x.cwiseAbs().maxCoeff());
            if (x.allFinite() && ((normals * x - offsets).array() <= 1e-9 * xs).all()) {
                bool dup = false;
                for (const auto& v : out) {
                    if ((v - x).cwiseAbs().maxCoeff() <= 1e-8 * xs) {
                        dup = true;
                        break;
                    }
                }
                if (!dup) {
                    out.push_back(x);
                }
            }
        }
        next_combination_or_done(idx, m, done);
    }
    std::sort(out.begin(), out.end(), [](const Vec& x, const Vec& y) { return lex_less(x, y); });
    return out;
}

ConvexBody ConvexBody::from_halfspaces(Mat normals, Vec offsets, const MveeOptions& options) {
    if (normals.rows() != offsets.size() || normals.cols() == 0) {
        throw StructuralError("ConvexBody: normals/offsets size mismatch");
    }
    const Eigen::Index d = normals.cols();
    // Boundedness and non-emptiness: maximize +-x_k over the body.
    LpProblem lp;
    lp.a_ub = normals;
    lp.b_ub = offsets;
    lp.lower = Vec::Constant(d, -kInf);
    lp.upper = Vec::Constant(d, kInf);
    for (Eigen::Index k = 0; k < d; ++k) {
        for (const double sign : {1.0, -1.0}) {
            lp.objective = -sign * Vec::Unit(d, k);
            const auto res = solve_lp(lp);
            if (res.status == LpStatus::Infeasible) {
                throw StructuralError("ConvexBody: empty halfspace intersection");
            }
            if (res.status == LpStatus::Unbounded) {
                throw StructuralError("ConvexBody: unbounded halfspace intersection");
            }
        }
    }
    ConvexBody body;
    body.normals_ = std::move(normals);
    body.offsets_ = std::move(offsets);
    body.vertices_ = polytope_vertices(body.normals_, body.offsets_);
    body.mvee_ = bco::mvee(body.vertices_, options);
    return body;
}

ConvexBody ConvexBody::box(const Vec& lower, const Vec& upper) {
    const Eigen::Index d = lower.size();
    if (upper.size() != d || (upper.array() <= lower.array()).any()) {
        throw StructuralError("ConvexBody::box: need lower < upper componentwise");
    }
    Mat normals = Mat::Zero(2 * d, d);
    Vec offsets(2 * d);
    for (Eigen::Index k = 0; k < d; ++k) {
        normals(2 * k, k) = 1.0;
        offsets(2 * k) = upper(k);
        normals(2 * k + 1, k) = -1.0;
        offsets(2 * k + 1) = -lower(k);
    }
    return from_halfspaces(std::move(normals), std::move(offsets));
}

bool ConvexBody::contains(const Vec& x, double tol) const {
    const double scale = std::max(1.0, offsets_.cwiseAbs().maxCoeff());
    return violation(x) <= tol * scale;
}

double ConvexBody::violation(const Vec& x) const { return (normals_ * x - offsets_).maxCoeff(); }

ConvexBody ConvexBody::cut(const Vec& h, double z) const {
    Mat normals(normals_.rows() + 1, normals_.cols());
    normals.topRows(normals_.rows()) = normals_;
    normals.row(normals_.rows()) = h.transpose();
    Vec offsets(offsets_.size() + 1);
    offsets.head(offsets_.size()) = offsets_;
    offsets(offsets_.size()) = z;
    auto out = from_halfspaces(std::move(normals), std::move(offsets));
    out.frozen_ = frozen_;
    return out;
}

ConvexBody ConvexBody::with_frozen(std::vector<Vec> frozen) const {
    ConvexBody out = *this;
    out.frozen_ = std::move(frozen);
    return out;
}

std::pair<Vec, Vec> ConvexBody::extent() const {
    Vec lo = vertices_.front();
    Vec hi = vertices_.front();
    for (const auto& v : vertices_) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    return {lo, hi};
}

double minkowski_distance(const Ellipsoid& mvee, const Vec& x) {
    return static_cast<double>(mvee.dim()) * mvee.norm(x);
}

double minkowski_distance(const ConvexBody& body, const Vec& x) {
    return minkowski_distance(body.mvee(), x);
}

ConvexBody bounding_box(const Ellipsoid& e) {
    const Eigen::Index d = e.dim();
    Mat normals(2 * d, d);
    Vec offsets(2 * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const Vec u = e.axes().col(i);
        const double c = u.dot(e.center());
        normals.row(2 * i) = u.transpose();
        offsets(2 * i) = c + e.axis_lengths()(i);
        normals.row(2 * i + 1) = -u.transpose();
        offsets(2 * i + 1) = -c + e.axis_lengths()(i);
    }
    return ConvexBody::from_halfspaces(std::move(normals), std::move(offsets));
}

ScaledIntersection::ScaledIntersection(const ConvexBody& k_prime, const ConvexBody& k, double beta)
    : outer_(k), beta_(beta) {
    if (beta <= 0.0) {
        throw StructuralError("ScaledIntersection: beta must be positive");
    }
    const auto d = k.dim();
    // gamma(y, K') <= beta  <=>  ||y - c||_E <= beta / d.
    scaled_ = k_prime.mvee().scaled(beta / static_cast<double>(d));
    const auto dirs = unit_directions(d);
    const Mat l_inv_t = scaled_.axes() * scaled_.axis_lengths().cwiseInverse().asDiagonal();
    // Tangent halfspaces of the whitened unit ball; the result contains the ellipsoid.
    const auto m0 = k.offsets().size();
    Mat normals(m0 + static_cast<Eigen::Index>(dirs.size()), d);
    Vec offsets(normals.rows());
    normals.topRows(m0) = k.normals();
    offsets.head(m0) = k.offsets();
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        const Vec n = l_inv_t * dirs[j];
        const auto r = m0 + static_cast<Eigen::Index>(j);
        normals.row(r) = n.transpose();
        offsets(r) = n.dot(scaled_.center()) + 1.0;
    }
    polytope_ = ConvexBody::from_halfspaces(std::move(normals), std::move(offsets));
}

bool ScaledIntersection::contains(const Vec& x, double tol) const {
    return outer_.contains(x, tol) && scaled_.norm(x) <= 1.0 + tol;
}

}  // namespace bco
