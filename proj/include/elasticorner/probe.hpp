#pragma once

// Exponential probe v = (exp(-s sqrt z), i exp(-s sqrt z)), z = x1 + i x2,
// and the sector moments it generates.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "errors.hpp"
#include "geometry.hpp"
#include "jet.hpp"
#include "quadrature.hpp"

namespace elasticorner {

using CVec2 = Eigen::Matrix<cplx, 2, 1>;

/// sqrt|z| (cos t/2 + i sin t/2) with t = arg z in (-pi, pi]. A signed zero
/// imaginary part does not move a point of the negative axis off t = pi.
inline cplx principal_sqrt(cplx z) {
    const double r = std::abs(z);
    if (r == 0.0) return 0.0;
    double t = std::atan2(z.imag(), z.real());
    if (t <= -std::numbers::pi) t = std::numbers::pi;
    if (z.imag() == 0.0 && z.real() < 0.0) t = std::numbers::pi;
    return std::polar(std::sqrt(r), 0.5 * t);
}

struct ExponentialProbe {
    double s = 1.0;

    explicit ExponentialProbe(double sharpness) : s(sharpness) {
        if (!(s > 0.0)) throw DomainError("ExponentialProbe: s must be positive");
    }
};

inline cplx probe_scalar(const Vec2& x, const ExponentialProbe& p) {
    return std::exp(-p.s * principal_sqrt(cplx(x.x(), x.y())));
}

inline CVec2 probe_eval(const Vec2& x, const ExponentialProbe& p) {
    const cplx v1 = probe_scalar(x, p);
    return {v1, cplx(0.0, 1.0) * v1};
}

/// The probe as a jet field (exact first and second derivatives off the cut).
inline JetField<2> probe_jet_field(const ExponentialProbe& p) {
    const double s = p.s;
    return [s](const JetVec<2>& x) {
        const Jet<2> z = x[0] + cplx(0.0, 1.0) * x[1];
        const cplx r = principal_sqrt(z.v);
        const Jet<2> root = compose(z, r, 0.5 / r, -0.25 / (r * z.v));
        const Jet<2> v1 = exp(root * (-s));
        return JetVec<2>{v1, cplx(0.0, 1.0) * v1};
    };
}

/// T_nu v on the circle |x| = r for the inward normal nu = -x/|x|:
/// s mu (sqrt z / |z|) v.
inline CVec2 probe_traction_on_circle(const Vec2& x, const ExponentialProbe& p, double mu) {
    const double r = x.norm();
    if (!(r > 0.0)) throw DomainError("probe_traction_on_circle: |x| must be positive");
    const cplx z(x.x(), x.y());
    return (p.s * mu * principal_sqrt(z) / r) * probe_eval(x, p);
}

/// C_K = 6i (e^{-2i theta_M} - e^{-2i theta_m}) = 12 sin(opening) e^{-i(theta_m + theta_M)}.
/// Exactly zero for a half plane.
inline cplx sector_moment_constant(double theta_m, double theta_M) {
    const double opening = theta_M - theta_m;
    if (opening == std::numbers::pi) return 0.0;
    return 12.0 * std::sin(opening) * std::polar(1.0, -(theta_m + theta_M));
}

inline cplx sector_moment_constant(const Sector& K) { return sector_moment_constant(K.theta_m(), K.theta_M()); }

/// Closed form of the integral of v_1 over the infinite cone K.
inline cplx sector_moment_exact(const Sector& K, double s) {
    if (!(s > 0.0)) throw DomainError("sector_moment_exact: s must be positive");
    const cplx i(0.0, 1.0);
    return 6.0 * i * (std::exp(-2.0 * i * K.theta_M()) - std::exp(-2.0 * i * K.theta_m())) / std::pow(s, 4);
}

/// 2 (theta_M - theta_m) Gamma(2 alpha + 4) delta^{-(2 alpha + 4)} s^{-2 alpha - 4}.
inline double sector_alpha_bound(const Sector& K, double s, double alpha) {
    if (!(alpha > 0.0)) throw DomainError("sector_alpha_bound: alpha must be positive");
    if (!(s > 0.0)) throw DomainError("sector_alpha_bound: s must be positive");
    const double p = 2.0 * alpha + 4.0;
    return 2.0 * K.opening() * std::tgamma(p) * std::pow(K.delta() * s, -p);
}

/// 6 (theta_M - theta_m) delta^{-4} s^{-4} exp(-delta s sqrt(h) / 2).
inline double sector_tail_bound(const Sector& K, double s, double h) {
    if (!(s > 0.0)) throw DomainError("sector_tail_bound: s must be positive");
    if (!(h >= 0.0)) throw DomainError("sector_tail_bound: h must be nonnegative");
    const double d = K.delta();
    return 6.0 * K.opening() * std::pow(d * s, -4) * std::exp(-0.5 * d * s * std::sqrt(h));
}

/// Integral of |v_1| |x|^alpha over K, reduced to one angular integral of
/// 2 Gamma(2 alpha + 4) (s cos(theta/2))^{-(2 alpha + 4)}.
inline double sector_abs_moment(const Sector& K, double s, double alpha, int order = 64) {
    const double p = 2.0 * alpha + 4.0;
    double acc = 0.0;
    for (const auto& [th, w] : gauss_on(K.theta_m(), K.theta_M(), order))
        acc += w * 2.0 * std::tgamma(p) * std::pow(s * std::cos(0.5 * th), -p);
    return acc;
}

/// Integral of |v_1| over K minus B(0, h), from the closed radial antiderivative
/// 2 e^{-y} (y^3 + 3y^2 + 6y + 6) / (c s)^4 with c = cos(theta/2), y = c s sqrt(h).
inline double sector_tail_exact(const Sector& K, double s, double h, int order = 64) {
    double acc = 0.0;
    for (const auto& [th, w] : gauss_on(K.theta_m(), K.theta_M(), order)) {
        const double c = std::cos(0.5 * th);
        const double y = c * s * std::sqrt(h);
        acc += w * 2.0 * std::exp(-y) * (((y + 3.0) * y + 6.0) * y + 6.0) / std::pow(c * s, 4);
    }
    return acc;
}

/// Polar rule adapted to e^{-s sqrt(rho) e^{i theta/2}} on K cap B(0, R): enough
/// angular panels for the phase sweep and radial points for the oscillation.
inline Rule2 probe_sector_rule(const Sector& K, double s, double R) {
    const double reach = std::min(s * std::sqrt(R), 45.0 / K.delta());
    PolarRuleOptions opt;
    opt.levels = 40;
    opt.ratio = 0.5;
    opt.radial_order = std::clamp(16 + static_cast<int>(0.4 * reach), 16, 64);
    opt.angular_order = 16;
    opt.angular_panels = std::max(1, static_cast<int>(std::ceil(0.5 * reach * K.opening() / 6.0)));
    return sector_ball_rule(K, R, opt);
}

struct SectorMomentQuadrature {
    cplx value;
    double radius;
    double tail_bound;
    bool tail_ok;
    std::string warning;
};

/// Quadrature of the integral of v_1 over K cap B(0, R). R <= 0 selects the
/// radius at which sector_tail_bound drops below 1e-8 of the closed form.
inline SectorMomentQuadrature sector_moment_quadrature(const Sector& K, double s, double R = 0.0) {
    if (!(s > 0.0)) throw DomainError("sector_moment_quadrature: s must be positive");
    const double d = K.delta();
    const double target = 1e-8 * std::max(std::abs(sector_moment_exact(K, s)), 1e-3 * std::pow(s, -4));
    if (!(R > 0.0)) {
        const double pre = 6.0 * K.opening() * std::pow(d * s, -4);
        const double root = std::max(0.0, 2.0 / (d * s) * std::log(pre / target));
        R = std::max(root * root, 1e-12);
    }
    SectorMomentQuadrature out;
    out.radius = R;
    out.tail_bound = sector_tail_bound(K, s, R);
    out.tail_ok = out.tail_bound <= target * (1.0 + 1e-9);
    if (!out.tail_ok) out.warning = "tail bound " + std::to_string(out.tail_bound) + " exceeds budget";
    const ExponentialProbe p(s);
    out.value = probe_sector_rule(K, s, R).integrate([&](const Vec2& x) { return probe_scalar(x, p); });
    return out;
}

}  // namespace elasticorner
