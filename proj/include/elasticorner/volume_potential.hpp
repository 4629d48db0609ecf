#pragma once

// Radiated field u = -int G(x, y) f(y) dy of a planar scene, far-field
// patterns, the Helmholtz split and the far-field asymptotics.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ball_transform.hpp"
#include "elastic_core.hpp"
#include "errors.hpp"
#include "fitting.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "scene.hpp"

namespace elasticorner {

enum class VolumePotentialMethod { Auto, Fan, Regular };

struct VolumePotentialOptions {
    VolumePotentialMethod method = VolumePotentialMethod::Auto;
    int t_levels = 10;          ///< geometric panels toward the target
    double t_ratio = 0.25;
    int t_order = 12;
    int tau_order = 12;         ///< per panel along an edge
    int angular_order = 16;     ///< per angular panel (disk supports)
    int angular_panels = 4;
    int regular_order = 10;     ///< triangle rule of the far-target path
    double far_factor = 0.25;   ///< Regular when dist(x, support) > far_factor * diameter
};

namespace detail {

/// Nodes on [0, 1] graded geometrically toward 0.
inline std::vector<std::pair<double, double>> graded_unit_rule(int levels, double ratio, int order) {
    std::vector<std::pair<double, double>> out;
    double hi = 1.0;
    for (int k = 0; k < levels; ++k) {
        const double lo = hi * ratio;
        for (const auto& n : gauss_on(lo, hi, order)) out.push_back(n);
        hi = lo;
    }
    for (const auto& n : gauss_on(0.0, hi, order)) out.push_back(n);
    return out;
}

/// Panels of [0, 1] doubling in width away from the point c.
inline std::vector<double> breakpoints_around(double c, double width) {
    width = std::max(width, 1e-12);
    std::vector<double> b{c};
    for (double w = width; c - w > 0.0; w *= 2.0) b.push_back(c - w);
    for (double w = width; c + w < 1.0; w *= 2.0) b.push_back(c + w);
    b.push_back(0.0);
    b.push_back(1.0);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end(), [](double a, double d) { return std::abs(a - d) < 1e-15; }), b.end());
    return b;
}

}  // namespace detail

/// Evaluator of the planar radiated field of a scene; caches the rules that
/// do not depend on the target.
class VolumePotential {
public:
    explicit VolumePotential(const SourceScene& scene, VolumePotentialOptions opt = {})
        : scene_(scene), opt_(opt) {
        if (scene.dim() != 2) throw CapabilityError("volume_potential: only planar scenes are supported");
        t_rule_ = detail::graded_unit_rule(opt.t_levels, opt.t_ratio, opt.t_order);
        if (scene.is_polygon()) {
            const double diam = scene.diameter();
            const double size = std::min(0.125 * diam, 1.5 / scene.freq().omega_s);
            const int sub = std::clamp(static_cast<int>(std::ceil(std::log2(diam / size))), 1, 6);
            regular_ = polygon_rule(scene.polygon(), opt.regular_order, sub);
        }
    }

    const SourceScene& scene() const { return scene_; }

    CVec<2> operator()(const Vec2& x) const {
        if (scene_.density_is_zero()) return CVec<2>::Zero();
        if (const auto* d = std::get_if<DiskSupport>(&scene_.support())) return disk_polar(*d, x);
        const double dist = scene_.distance_to_support(x);
        VolumePotentialMethod m = opt_.method;
        if (m == VolumePotentialMethod::Auto)
            m = dist > opt_.far_factor * scene_.diameter() ? VolumePotentialMethod::Regular : VolumePotentialMethod::Fan;
        return m == VolumePotentialMethod::Regular ? regular(x) : fan(x);
    }

private:
    CVec<2> kernel_times_density(const Vec2& x, const Vec2& y) const {
        return green_tensor<2>(x, y, scene_.material(), scene_.freq()) * evaluate(scene_.density(), y);
    }

    CVec<2> regular(const Vec2& x) const {
        CVec<2> acc = CVec<2>::Zero();
        for (std::size_t i = 0; i < regular_.size(); ++i) {
            if ((regular_.nodes[i] - x).squaredNorm() == 0.0) continue;
            acc += regular_.weights[i] * kernel_times_density(x, regular_.nodes[i]);
        }
        return -acc;
    }

    // Signed fan of triangles (x, V_i, V_{i+1}) with y = x + t (P(tau) - x):
    // the Jacobian t cross(...) cancels the logarithmic singularity at t = 0
    // and the tau panels are graded toward the foot of the perpendicular.
    CVec<2> fan(const Vec2& x) const {
        const ConvexPolygon& poly = scene_.polygon();
        CVec<2> acc = CVec<2>::Zero();
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Vec2 a = poly.vertex(i), b = poly.vertex(i + 1);
            const double twice_area = cross2(a - x, b - x);
            const Vec2 e = b - a;
            const double L = e.norm();
            if (std::abs(twice_area) <= 1e-15 * L * L) continue;
            const double foot = std::clamp((x - a).dot(e) / (L * L), 0.0, 1.0);
            const double d = (a + foot * e - x).norm();
            const auto br = detail::breakpoints_around(foot, d / L);
            for (std::size_t p = 0; p + 1 < br.size(); ++p)
                for (const auto& [tau, wtau] : gauss_on(br[p], br[p + 1], opt_.tau_order)) {
                    const Vec2 q = a + tau * e - x;
                    for (const auto& [t, wt] : t_rule_)
                        acc += (wtau * wt * t * twice_area) * kernel_times_density(x, x + t * q);
                }
        }
        return -acc;
    }

    // Polar coordinates about the target; exit radii are analytic.
    CVec<2> disk_polar(const DiskSupport& disk, const Vec2& x) const {
        const Vec2 rel = x - disk.center;
        const double D = rel.norm();
        const double a = disk.radius;
        CVec<2> acc = CVec<2>::Zero();
        if (D < a) {
            const double step = 2.0 * std::numbers::pi / opt_.angular_panels;
            for (int p = 0; p < opt_.angular_panels; ++p)
                for (const auto& [phi, wphi] : gauss_on(p * step, (p + 1) * step, opt_.angular_order)) {
                    const Vec2 dir(std::cos(phi), std::sin(phi));
                    const double b = dir.dot(rel);
                    const double r2 = -b + std::sqrt(b * b - (D * D - a * a));
                    for (const auto& [t, wt] : t_rule_)
                        acc += (wphi * wt * t * r2 * r2) * kernel_times_density(x, x + t * r2 * dir);
                }
            return -acc;
        }
        // outside: phi = phi0 + alpha sin(psi) removes the square-root edges of the chord
        const double phi0 = std::atan2(-rel.y(), -rel.x());
        const double alpha = std::asin(std::min(1.0, a / D));
        const double step = std::numbers::pi / opt_.angular_panels;
        for (int p = 0; p < opt_.angular_panels; ++p)
            for (const auto& [psi, wpsi] :
                 gauss_on(-0.5 * std::numbers::pi + p * step, -0.5 * std::numbers::pi + (p + 1) * step, opt_.angular_order)) {
                const double dphi = alpha * std::sin(psi);
                const double jac = alpha * std::cos(psi);
                const Vec2 dir(std::cos(phi0 + dphi), std::sin(phi0 + dphi));
                const double c = D * std::cos(dphi);
                const double h2 = std::max(0.0, a * a - D * D * std::sin(dphi) * std::sin(dphi));
                const double r1 = c - std::sqrt(h2), r2 = c + std::sqrt(h2);
                for (const auto& [t, wt] : t_rule_) {
                    const double r = r1 + t * (r2 - r1);
                    acc += (wpsi * jac * wt * r * (r2 - r1)) * kernel_times_density(x, x + r * dir);
                }
            }
        return -acc;
    }

    SourceScene scene_;
    VolumePotentialOptions opt_;
    std::vector<std::pair<double, double>> t_rule_;
    Rule2 regular_;
};

/// u(x) with (mu Delta + (lambda + mu) grad div + omega^2) u = f.
inline CVec<2> volume_potential(const SourceScene& scene, const Vec2& x, const VolumePotentialOptions& opt = {}) {
    return VolumePotential(scene, opt)(x);
}

/// Far-field pair for one direction.
struct FarFieldSample {
    CVecX up_inf;
    CVecX us_inf;
};

struct FarFieldPattern {
    int dim = 2;
    std::vector<Eigen::VectorXd> directions;
    std::vector<CVecX> up_inf;
    std::vector<CVecX> us_inf;

    double max_magnitude() const {
        double m = 0.0;
        for (std::size_t i = 0; i < directions.size(); ++i) m = std::max({m, up_inf[i].norm(), us_inf[i].norm()});
        return m;
    }
};

/// Pi_e w = (w.e) e.
inline CVecX project_parallel(const CVecX& w, const Eigen::VectorXd& e) {
    const cplx c = e.cast<cplx>().dot(w);  // e real, so no conjugation issue
    return c * e.cast<cplx>();
}

/// Pi_{e perp} w = w - (w.e) e.
inline CVecX project_perp(const CVecX& w, const Eigen::VectorXd& e) { return w - project_parallel(w, e); }

/// int e^{-ik e.y} f(y) dy over the support.
inline CVecX source_fourier(const SourceScene& scene, const Eigen::VectorXd& e, double k) {
    const cplx i(0.0, 1.0);
    if (scene.dim() == 2) {
        const Vec2 d = e.head<2>();
        Rule2 rule;
        if (scene.is_polygon()) {
            const double diam = scene.diameter();
            const int sub = std::clamp(static_cast<int>(std::ceil(std::log2(std::max(1.0, k * diam / 2.0)))), 0, 7);
            rule = polygon_rule(scene.polygon(), 10, sub);
        } else {
            const auto& disk = std::get<DiskSupport>(scene.support());
            const int n = 16 + static_cast<int>(2.0 * k * disk.radius);
            rule = disk_rule(disk.center, disk.radius, n, 2 * n);
        }
        CVecX acc = CVecX::Zero(2);
        for (std::size_t j = 0; j < rule.size(); ++j)
            acc += rule.weights[j] * std::exp(-i * k * d.dot(rule.nodes[j])) * evaluate(scene.density(), rule.nodes[j]);
        return acc;
    }
    const Vec3 d = e.head<3>();
    const double a = std::get<BallSupport>(scene.support()).radius;
    CVecX out = CVecX::Zero(3);
    for (int c = 0; c < 3; ++c) {
        const Polynomial<3>& p = scene.density3()[c];
        if (p.is_zero()) continue;
        if (p.degree() == 0)
            out(c) = p.terms().begin()->second * ball_char_ft(k, a);
        else
            out(c) = ball_ft_quadrature(k, d, p, a);
    }
    return out;
}

inline void require_unit_direction(const Eigen::VectorXd& e, int dim) {
    if (e.size() != dim) throw DomainError("far_field: direction has the wrong dimension");
    if (std::abs(e.norm() - 1.0) > 1e-12) throw DomainError("far_field: direction must be a unit vector");
}

/// u_p^inf(e) = Pi_e F(omega_p e), u_s^inf(e) = Pi_{e perp} F(omega_s e), F the source transform.
inline FarFieldSample far_field(const SourceScene& scene, const Eigen::VectorXd& e) {
    require_unit_direction(e, scene.dim());
    if (scene.density_is_zero()) return {CVecX::Zero(scene.dim()), CVecX::Zero(scene.dim())};
    return {project_parallel(source_fourier(scene, e, scene.freq().omega_p), e),
            project_perp(source_fourier(scene, e, scene.freq().omega_s), e)};
}

/// m equispaced directions on the circle.
inline std::vector<Eigen::VectorXd> circle_directions(int m) {
    std::vector<Eigen::VectorXd> out;
    for (int j = 0; j < m; ++j) {
        const double t = 2.0 * std::numbers::pi * j / m;
        out.push_back(Eigen::Vector2d(std::cos(t), std::sin(t)));
    }
    return out;
}

/// Fibonacci lattice of m points on the unit sphere.
inline std::vector<Eigen::VectorXd> fibonacci_sphere(int m) {
    std::vector<Eigen::VectorXd> out;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < m; ++j) {
        const double z = 1.0 - (2.0 * j + 1.0) / m;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        out.push_back(Eigen::Vector3d(r * std::cos(golden * j), r * std::sin(golden * j), z));
    }
    return out;
}

inline FarFieldPattern far_field_pattern(const SourceScene& scene, int m) {
    if (m < 1) throw DomainError("far_field_pattern: need at least one direction");
    FarFieldPattern out;
    out.dim = scene.dim();
    out.directions = scene.dim() == 2 ? circle_directions(m) : fibonacci_sphere(m);
    out.up_inf.resize(m);
    out.us_inf.resize(m);
    parallel_for(static_cast<std::size_t>(m), [&](std::size_t j) {
        const auto s = far_field(scene, out.directions[j]);
        out.up_inf[j] = s.up_inf;
        out.us_inf[j] = s.us_inf;
    });
    return out;
}

/// Constants kappa with u(R e) ~ kappa_s e^{i omega_s R} R^{-1/2} u_s^inf + kappa_p e^{i omega_p R} R^{-1/2} u_p^inf.
struct FarFieldConstants {
    cplx kappa_p;
    cplx kappa_s;
};

inline FarFieldConstants far_field_constants_2d(const LameParameters& m, const Wavenumbers& k) {
    const cplx phase = std::polar(1.0, 0.25 * std::numbers::pi);
    return {-phase / ((m.lambda() + 2.0 * m.mu()) * std::sqrt(8.0 * std::numbers::pi * k.omega_p)),
            -phase / (m.mu() * std::sqrt(8.0 * std::numbers::pi * k.omega_s))};
}

struct HelmholtzSplit {
    CVec<2> u;
    CVec<2> u_p;
    CVec<2> u_s;
};

/// u_p = -(1/omega_p^2) grad div u, u_s = (1/omega_s^2) rot rot u = (1/omega_s^2)(grad div - Delta) u,
/// by central differences of step h on the volume potential.
inline HelmholtzSplit helmholtz_split(const VolumePotential& vp, const Vec2& x, double h) {
    const SourceScene& scene = vp.scene();
    if (!(h > 0.0)) throw DomainError("helmholtz_split: step must be positive");
    if (!(scene.distance_to_support(x) > 4.0 * h))
        throw AccuracyError("helmholtz_split: target closer than 4 steps to the support");
    const Vec2 e1(h, 0), e2(0, h);
    const CVec<2> u0 = vp(x);
    const CVec<2> up1 = vp(x + e1), um1 = vp(x - e1), up2 = vp(x + e2), um2 = vp(x - e2);
    const CVec<2> upp = vp(x + e1 + e2), upm = vp(x + e1 - e2), ump = vp(x - e1 + e2), umm = vp(x - e1 - e2);
    const CVec<2> d11 = (up1 - 2.0 * u0 + um1) / (h * h);
    const CVec<2> d22 = (up2 - 2.0 * u0 + um2) / (h * h);
    const CVec<2> d12 = (upp - upm - ump + umm) / (4.0 * h * h);
    const CVec<2> grad_div(d11(0) + d12(1), d12(0) + d22(1));
    const CVec<2> lap = d11 + d22;
    const double wp2 = scene.freq().omega_p * scene.freq().omega_p;
    const double ws2 = scene.freq().omega_s * scene.freq().omega_s;
    return {u0, -grad_div / wp2, (grad_div - lap) / ws2};
}

inline HelmholtzSplit helmholtz_split(const SourceScene& scene, const Vec2& x, double h) {
    return helmholtz_split(VolumePotential(scene), x, h);
}

struct FarFieldAsymptoticReport {
    std::vector<double> radii;
    std::vector<double> field_magnitude;
    std::vector<double> residual_magnitude;
    double residual_slope = std::numeric_limits<double>::quiet_NaN();   ///< fitted exponent, expected -(n+1)/2
    double residual_fit_quality = 0.0;                                   ///< relative residual of the fit
    double leading_slope = std::numeric_limits<double>::quiet_NaN();    ///< expected -(n-1)/2
    double printed_prefactor_slope = std::numeric_limits<double>::quiet_NaN();
    cplx fitted_kappa_p = 0.0;
    cplx fitted_kappa_s = 0.0;
    cplx kappa_p = 0.0;
    cplx kappa_s = 0.0;
    bool zero_source = false;
};

namespace detail {

// Fits the vector samples v(R_i) ~ R^{-p} (a e^{i kp R} + b e^{i ks R}) with
// complex vector amplitudes a, b and returns the exponent p.
inline ProjectionFit two_wave_power_fit(const std::vector<double>& R, const std::vector<CVec<2>>& v, double kp,
                                        double ks, double lo, double hi) {
    const int n = static_cast<int>(R.size());
    CVecX b(2 * n);
    Eigen::VectorXd w(2 * n);
    for (int i = 0; i < n; ++i) {
        b(2 * i) = v[i](0);
        b(2 * i + 1) = v[i](1);
        const double scale = std::max(v[i].norm(), 1e-300);
        w(2 * i) = w(2 * i + 1) = 1.0 / scale;
    }
    auto design = [&](double p) {
        CMatX A = CMatX::Zero(2 * n, 4);
        for (int i = 0; i < n; ++i) {
            const cplx ep = std::exp(cplx(0, kp * R[i])) * std::pow(R[i], -p);
            const cplx es = std::exp(cplx(0, ks * R[i])) * std::pow(R[i], -p);
            for (int c = 0; c < 2; ++c) {
                A(2 * i + c, c) = ep;
                A(2 * i + c, 2 + c) = es;
            }
        }
        return A;
    };
    return variable_projection(design, b, w, lo, hi);
}

}  // namespace detail

/// Compares u(R e) with the leading far-field term and fits decay exponents.
inline FarFieldAsymptoticReport far_field_asymptotic_check(const SourceScene& scene, const Vec2& e,
                                                           const std::vector<double>& radii) {
    if (scene.dim() != 2) throw CapabilityError("far_field_asymptotic_check: planar scenes only");
    if (std::abs(e.norm() - 1.0) > 1e-12) throw DomainError("far_field_asymptotic_check: e must be a unit vector");
    if (radii.size() < 4) throw DomainError("far_field_asymptotic_check: need at least 4 radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1])) throw DomainError("far_field_asymptotic_check: radii must increase");
    if (radii.front() < 10.0 * scene.diameter())
        throw AccuracyError("far_field_asymptotic_check: radii must be at least 10 diameters");

    FarFieldAsymptoticReport rep;
    rep.radii = radii;
    const LameParameters& m = scene.material();
    const Wavenumbers& k = scene.freq();
    const auto kap = far_field_constants_2d(m, k);
    rep.kappa_p = kap.kappa_p;
    rep.kappa_s = kap.kappa_s;
    const FarFieldSample ff = far_field(scene, e);
    const VolumePotential vp(scene);

    const std::size_t n = radii.size();
    std::vector<CVec<2>> u(n), lead_p(n), lead_s(n);
    parallel_for(n, [&](std::size_t i) { u[i] = vp(radii[i] * e); });
    std::vector<CVec<2>> residual(n), printed(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double R = radii[i];
        lead_p[i] = std::exp(cplx(0, k.omega_p * R)) / std::sqrt(R) * CVec<2>(ff.up_inf);
        lead_s[i] = std::exp(cplx(0, k.omega_s * R)) / std::sqrt(R) * CVec<2>(ff.us_inf);
        residual[i] = u[i] - kap.kappa_p * lead_p[i] - kap.kappa_s * lead_s[i];
        printed[i] = u[i] - (lead_p[i] + lead_s[i]) / (4.0 * std::numbers::pi);
        rep.field_magnitude.push_back(u[i].norm());
        rep.residual_magnitude.push_back(residual[i].norm());
    }
    if (scene.density_is_zero()) {
        rep.zero_source = true;
        return rep;
    }
    const auto res_fit = detail::two_wave_power_fit(radii, residual, k.omega_p, k.omega_s, 0.0, 4.0);
    rep.residual_slope = -res_fit.parameter;
    rep.residual_fit_quality = res_fit.relative_residual;
    rep.leading_slope = -detail::two_wave_power_fit(radii, u, k.omega_p, k.omega_s, 0.0, 4.0).parameter;
    rep.printed_prefactor_slope = -detail::two_wave_power_fit(radii, printed, k.omega_p, k.omega_s, 0.0, 4.0).parameter;

    // kappa fitted on the largest radii, where the remainder is smallest
    CMatX A(2 * n, 2);
    CVecX b(2 * n);
    Eigen::VectorXd w(2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (int c = 0; c < 2; ++c) {
            A(2 * i + c, 0) = lead_p[i](c);
            A(2 * i + c, 1) = lead_s[i](c);
            b(2 * i + c) = u[i](c);
            w(2 * i + c) = radii[i];
        }
    const auto kf = weighted_least_squares(A, b, w);
    rep.fitted_kappa_p = kf.coefficients(0);
    rep.fitted_kappa_s = kf.coefficients(1);
    return rep;
}

}  // namespace elasticorner
