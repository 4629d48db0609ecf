#pragma once

// Fourier transform of polynomial densities on a ball centred at the origin.

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "errors.hpp"
#include "polynomial.hpp"
#include "quadrature.hpp"
#include "special_functions.hpp"

namespace elasticorner {

/// J_{3/2}(k) / (k / 2 pi)^{3/2}: the integral of e^{-ik e.y} over the unit ball.
inline double ball_char_ft(double k) {
    if (!(k > 0.0)) throw DomainError("ball_char_ft: k must be positive");
    return special::bessel_j_half(3, k) / std::pow(k / (2.0 * std::numbers::pi), 1.5);
}

/// Same transform on a ball of radius a: a^3 ball_char_ft(k a).
inline double ball_char_ft(double k, double radius) { return std::pow(radius, 3) * ball_char_ft(k * radius); }

struct SphericalOrders {
    int radial = 24;
    int polar = 48;
    int azimuthal = 48;
};

/// Tensor Gauss rule in spherical coordinates (r, cos t, phi) on B(0, a):
/// the integral of e^{-ik e.y} p(y) over the ball, p a scalar polynomial.
inline cplx ball_ft_quadrature(double k, const Vec3& e, const Polynomial<3>& p, double radius,
                               const SphericalOrders& o = {}) {
    const cplx i(0.0, 1.0);
    cplx acc = 0.0;
    const auto rr = gauss_on(0.0, radius, o.radial);
    const auto cc = gauss_on(-1.0, 1.0, o.polar);
    const auto pp = gauss_on(0.0, 2.0 * std::numbers::pi, o.azimuthal);
    for (const auto& [r, wr] : rr)
        for (const auto& [c, wc] : cc) {
            const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
            for (const auto& [ph, wp] : pp) {
                const Vec3 y = r * Vec3(sn * std::cos(ph), sn * std::sin(ph), c);
                acc += wr * wc * wp * r * r * std::exp(-i * k * e.dot(y)) * p(y);
            }
        }
    return acc;
}

}  // namespace elasticorner
