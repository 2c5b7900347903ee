#include "bco/ellipsoid.hpp"

#include <cmath>
#include <numbers>

#include "bco/error.hpp"

namespace bco {

Ellipsoid::Ellipsoid(Vec center, Mat shape) : center_(std::move(center)), shape_(std::move(shape)) {
    if (shape_.rows() != center_.size() || shape_.cols() != center_.size()) {
        throw StructuralError("Ellipsoid: shape matrix does not match center dimension");
    }
    auto eig = sym_eigen(shape_);
    const double top = eig.values.size() ? std::max(eig.values(0), 0.0) : 0.0;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        if (!(eig.values(i) > 1e-14 * std::max(top, 1e-300))) {
            throw DegenerateBody("Ellipsoid: shape matrix is not positive definite",
                                 static_cast<int>(i), static_cast<int>(center_.size()));
        }
    }
    shape_ = 0.5 * (shape_ + shape_.transpose());
    // Canonical signs: the largest-magnitude component of each axis is positive.
    for (Eigen::Index i = 0; i < eig.vectors.cols(); ++i) {
        Eigen::Index arg = 0;
        eig.vectors.col(i).cwiseAbs().maxCoeff(&arg);
        if (eig.vectors(arg, i) < 0.0) {
            eig.vectors.col(i) = -eig.vectors.col(i);
        }
    }
    lengths_ = eig.values.cwiseSqrt();
    axes_ = eig.vectors;
    inverse_ = axes_ * eig.values.cwiseInverse().asDiagonal() * axes_.transpose();
}

double Ellipsoid::norm(const Vec& x) const {
    const Vec y = x - center_;
    return std::sqrt(std::max(0.0, y.dot(inverse_ * y)));
}

bool Ellipsoid::contains(const Vec& x, double slack) const { return norm(x) <= 1.0 + slack; }

double Ellipsoid::volume() const { return unit_ball_volume(dim()) * lengths_.prod(); }

Ellipsoid Ellipsoid::scaled(double factor) const {
    return Ellipsoid(center_, shape_ * (factor * factor));
}

double Ellipsoid::support(const Vec& a) const {
    return a.dot(center_) + std::sqrt(std::max(0.0, a.dot(shape_ * a)));
}

double unit_ball_volume(Eigen::Index d) {
    const double h = static_cast<double>(d) / 2.0;
    return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0);
}

}  // namespace bco
