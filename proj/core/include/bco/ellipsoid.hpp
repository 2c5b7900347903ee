#pragma once

#include "bco/linalg.hpp"

namespace bco {

/// E = { x : (x - c)^T Q^{-1} (x - c) <= 1 }.
///
/// The shape matrix Q must be symmetric positive definite; its eigenvalues are
/// the squared semi-axis lengths. Inverse and eigen-decomposition are cached.
class Ellipsoid {
  public:
    Ellipsoid() = default;
    Ellipsoid(Vec center, Mat shape);

    [[nodiscard]] Eigen::Index dim() const { return center_.size(); }
    [[nodiscard]] const Vec& center() const { return center_; }
    [[nodiscard]] const Mat& shape() const { return shape_; }
    [[nodiscard]] const Mat& shape_inverse() const { return inverse_; }
    /// Semi-axis lengths, descending; column i of axes() is the matching direction.
    [[nodiscard]] const Vec& axis_lengths() const { return lengths_; }
    [[nodiscard]] const Mat& axes() const { return axes_; }

    /// ||x - c||_E, the Minkowski gauge of E around its center.
    [[nodiscard]] double norm(const Vec& x) const;
    [[nodiscard]] bool contains(const Vec& x, double slack = 0.0) const;
    [[nodiscard]] double volume() const;

    /// Same center, every semi-axis multiplied by `factor`.
    [[nodiscard]] Ellipsoid scaled(double factor) const;

    /// Maximum of <a, x> over E.
    [[nodiscard]] double support(const Vec& a) const;

  private:
    Vec center_;
    Mat shape_;
    Mat inverse_;
    Vec lengths_;
    Mat axes_;
};

/// Volume of the Euclidean unit ball in R^d.
[[nodiscard]] double unit_ball_volume(Eigen::Index d);

}  // namespace bco
