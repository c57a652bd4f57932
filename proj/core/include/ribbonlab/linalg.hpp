#pragma once

#include <Eigen/Dense>

#include <numbers>

namespace ribbonlab {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat32 = Eigen::Matrix<double, 3, 2>;

inline constexpr double pi = std::numbers::pi;

template <typename Derived>
auto sym(const Eigen::MatrixBase<Derived> &m) {
    return (0.5 * (m + m.transpose())).eval();
}

template <typename Derived>
auto skew(const Eigen::MatrixBase<Derived> &m) {
    return (0.5 * (m - m.transpose())).eval();
}

// Cross-product matrix: hat(w) * v == w.cross(v).
inline Mat3 hat(const Vec3 &w) {
    Mat3 m;
    m <<     0, -w(2),  w(1),
          w(2),     0, -w(0),
         -w(1),  w(0),     0;
    return m;
}

// Closed-form exp(hat(w)) (Rodrigues).
inline Mat3 rotation_exp(const Vec3 &w) {
    const double angle = w.norm();
    const Mat3 W = hat(w);
    if (angle < 1e-8) {
        // Taylor to third order; the neglected terms are below double precision.
        return Mat3::Identity() + W + 0.5 * W * W;
    }
    return Mat3::Identity() + (std::sin(angle) / angle) * W
         + ((1.0 - std::cos(angle)) / (angle * angle)) * W * W;
}

// Closed-form integral of exp(s * hat(w)) over s in [0, len].
inline Mat3 rotation_exp_integral(const Vec3 &w, double len) {
    const double rate = w.norm();
    const Mat3 W = hat(w);
    const double phi = rate * len;
    if (phi < 1e-6) {
        return len * Mat3::Identity() + 0.5 * len * len * W + (len * len * len / 6.0) * W * W;
    }
    return len * Mat3::Identity() + ((1.0 - std::cos(phi)) / (rate * rate)) * W
         + ((phi - std::sin(phi)) / (rate * rate * rate)) * W * W;
}

// Symmetric 2x2 <-> (s11, s22, s12) coordinates.
inline Vec3 sym2_coords(const Mat2 &m) {
    return {m(0, 0), m(1, 1), 0.5 * (m(0, 1) + m(1, 0))};
}

inline Mat2 sym2_from_coords(const Vec3 &c) {
    Mat2 m;
    m << c(0), c(2),
         c(2), c(1);
    return m;
}

} // namespace ribbonlab
