#pragma once

// Ball sources with vanishing far fields: tuning (lambda, mu) so that both
// wavenumbers are zeros of J_{3/2}.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ball_transform.hpp"
#include "elastic_core.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "scene.hpp"
#include "special_functions.hpp"
#include "volume_potential.hpp"

namespace elasticorner {

/// f = a chi_{B(0, r)} in R^3.
struct BallScene {
    double radius = 1.0;
    Vec3 amplitude = Vec3::UnitX();
    double omega = 1.0;
    LameParameters material{1.0, 1.0, 3};

    void validate() const {
        if (!(radius > 0.0)) throw GeometryError("BallScene: radius must be positive");
        if (!(omega > 0.0)) throw DomainError("BallScene: omega must be positive");
        if (material.dim() != 3) throw DomainError("BallScene: material must be 3D");
        if (!amplitude.allFinite()) throw DomainError("BallScene: non-finite amplitude");
    }

    SourceScene to_scene() const {
        validate();
        PolyVec<3> f;
        for (int c = 0; c < 3; ++c)
            if (amplitude(c) != 0.0) f[c] = Polynomial<3>::constant(amplitude(c));
        return SourceScene(BallSupport{radius}, f, material, omega);
    }
};

struct TunedLame {
    double omega;
    int index_p;
    int index_s;
    double A;  ///< omega_p
    double B;  ///< omega_s
    LameParameters material;
};

/// lambda = (omega/A)^2 - 2 (omega/B)^2, mu = (omega/B)^2 with A, B the chosen
/// zeros of J_{3/2}, so that omega_p = A and omega_s = B.
inline TunedLame tune_lame(double omega, int index_p, int index_s) {
    if (!(omega > 0.0)) throw DomainError("tune_lame: omega must be positive");
    if (index_p < 1 || index_s < 1) throw DomainError("tune_lame: zero indices start at 1");
    if (index_p >= index_s) throw DomainError("tune_lame: need index_p < index_s so that A < B");
    const double A = special::j32_zero(index_p);
    const double B = special::j32_zero(index_s);
    const double mu = (omega / B) * (omega / B);
    const double lambda = (omega / A) * (omega / A) - 2.0 * mu;
    const double margin = 3.0 * lambda + 2.0 * mu;
    if (!(margin > 0.0))
        throw ConvexityError("tune_lame: zeros (" + std::to_string(index_p) + ", " + std::to_string(index_s) +
                                 ") violate strong convexity, 3 lambda + 2 mu = " + std::to_string(margin),
                             margin);
    return {omega, index_p, index_s, A, B, LameParameters(lambda, mu, 3)};
}

/// Closed-form far fields of a ball source.
inline FarFieldSample ball_far_field(const BallScene& b, const Vec3& e) {
    require_unit_direction(e, 3);
    const Wavenumbers k(b.omega, b.material);
    const Eigen::VectorXd d = e;
    const CVecX a = b.amplitude.cast<cplx>();
    return {project_parallel(ball_char_ft(k.omega_p, b.radius) * a, d),
            project_perp(ball_char_ft(k.omega_s, b.radius) * a, d)};
}

/// Same pair by spherical tensor quadrature of the transform.
inline FarFieldSample ball_far_field_quadrature(const BallScene& b, const Vec3& e, const SphericalOrders& o = {}) {
    require_unit_direction(e, 3);
    const Wavenumbers k(b.omega, b.material);
    const Polynomial<3> one = Polynomial<3>::constant(1.0);
    const Eigen::VectorXd d = e;
    const CVecX a = b.amplitude.cast<cplx>();
    return {project_parallel(ball_ft_quadrature(k.omega_p, e, one, b.radius, o) * a, d),
            project_perp(ball_ft_quadrature(k.omega_s, e, one, b.radius, o) * a, d)};
}

struct NonradiatingReport {
    double omega = 0.0;
    double A = 0.0;  ///< omega_p of the material used
    double B = 0.0;  ///< omega_s
    double lambda = 0.0;
    double mu = 0.0;
    double convexity_margin = 0.0;
    int directions = 0;
    double max_farfield = 0.0;
    double oracle_residual = 0.0;
    double ball_volume = 0.0;
};

/// Direction used for the quadrature cross-check.
inline Vec3 oracle_direction() { return Vec3(1.0, 2.0, 2.0) / 3.0; }

/// Max of |u_p^inf|, |u_s^inf| over m Fibonacci directions, plus the gap between
/// the closed form and quadrature in one direction.
inline NonradiatingReport verify_nonradiating(const BallScene& b, int m = 64) {
    b.validate();
    if (m < 1) throw DomainError("verify_nonradiating: need at least one direction");
    const Wavenumbers k(b.omega, b.material);
    NonradiatingReport r;
    r.omega = b.omega;
    r.A = k.omega_p;
    r.B = k.omega_s;
    r.lambda = b.material.lambda();
    r.mu = b.material.mu();
    r.convexity_margin = b.material.convexity_margin();
    r.directions = m;
    r.ball_volume = 4.0 * std::numbers::pi / 3.0 * std::pow(b.radius, 3);

    const auto dirs = fibonacci_sphere(m);
    std::vector<double> mags(dirs.size());
    parallel_for(dirs.size(), [&](std::size_t j) {
        const auto s = ball_far_field(b, dirs[j].head<3>());
        mags[j] = std::max(s.up_inf.norm(), s.us_inf.norm());
    });
    r.max_farfield = *std::max_element(mags.begin(), mags.end());

    const Vec3 e = oracle_direction();
    const auto closed = ball_far_field(b, e);
    const auto quad = ball_far_field_quadrature(b, e);
    r.oracle_residual = std::max((closed.up_inf - quad.up_inf).norm(), (closed.us_inf - quad.us_inf).norm());
    return r;
}

/// Tuned unit ball with amplitude e_1.
inline NonradiatingReport verify_nonradiating(double omega, int index_p, int index_s, int m = 64) {
    const TunedLame t = tune_lame(omega, index_p, index_s);
    return verify_nonradiating(BallScene{1.0, Vec3::UnitX(), omega, t.material}, m);
}

}  // namespace elasticorner
