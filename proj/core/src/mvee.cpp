#include "bco/mvee.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bco/error.hpp"

namespace bco {

int affine_rank(const std::vector<Vec>& points) {
    if (points.size() < 2) {
        return 0;
    }
    const Mat p = to_columns(points);
    const Vec mean = p.rowwise().mean();
    const Mat centered = p.colwise() - mean;
    Eigen::JacobiSVD<Mat> svd(centered);
    const Vec s = svd.singularValues();
    const double scale = std::max(s.size() ? s(0) : 0.0, 1e-300);
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > 1e-10 * scale && s(i) > 1e-300) {
            ++rank;
        }
    }
    return rank;
}

Ellipsoid mvee(const std::vector<Vec>& points, const MveeOptions& options) {
    if (points.empty()) {
        throw StructuralError("mvee: empty point set");
    }
    const Eigen::Index d = points.front().size();
    for (const auto& p : points) {
        if (p.size() != d) {
            throw StructuralError("mvee: points of mixed dimension");
        }
    }
    const int rank = affine_rank(points);
    if (rank < d) {
        throw DegenerateBody("mvee: points span an affine subspace of dimension " +
                                 std::to_string(rank) + " < " + std::to_string(d),
                             rank, static_cast<int>(d));
    }

    const Mat p = to_columns(points);
    const Eigen::Index n = p.cols();
    Mat q(d + 1, n);
    q.topRows(d) = p;
    q.row(d).setOnes();
    const double dd = static_cast<double>(d + 1);

    Vec u = Vec::Constant(n, 1.0 / static_cast<double>(n));
    Vec m(n);
    int iter = 0;
    for (;; ++iter) {
        if (iter >= options.max_iterations) {
            throw NumericalFailure("mvee: iteration cap of " + std::to_string(options.max_iterations) +
                                   " reached");
        }
        const Mat x = q * u.asDiagonal() * q.transpose();
        const Eigen::LDLT<Mat> ldlt(x);
        const Mat solved = ldlt.solve(q);
        m = (q.cwiseProduct(solved)).colwise().sum().transpose();

        Eigen::Index j = 0;
        m.maxCoeff(&j);
        Eigen::Index k = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (u(i) > 0.0 && (k < 0 || m(i) < m(k))) {
                k = i;
            }
        }
        const double eps_plus = m(j) / dd - 1.0;
        const double eps_minus = 1.0 - m(k) / dd;
        if (std::max(eps_plus, eps_minus) <= options.tol) {
            break;
        }
        if (eps_plus >= eps_minus) {
            const double step = (m(j) - dd) / (dd * (m(j) - 1.0));
            u *= (1.0 - step);
            u(j) += step;
        } else {
            double step = (m(k) - dd) / (dd * (m(k) - 1.0));
            const bool drop = -u(k) / (1.0 - u(k)) >= step;
            if (drop) {
                step = -u(k) / (1.0 - u(k));
            }
            u *= (1.0 - step);
            u(k) += step;
            if (drop) {
                u(k) = 0.0;
            }
        }
        u = u.cwiseMax(0.0);
        u /= u.sum();
    }

    const Vec c = p * u;
    const Mat scatter = p * u.asDiagonal() * p.transpose() - c * c.transpose();
    Mat shape = static_cast<double>(d) * scatter;
    shape = 0.5 * (shape + shape.transpose());
    const Eigen::LDLT<Mat> inv(shape);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vec y = p.col(i) - c;
        worst = std::max(worst, y.dot(inv.solve(y)));
    }
    if (worst > 1.0) {
        shape *= worst;
    }
    return Ellipsoid(c, shape);
}

}  // namespace bco
