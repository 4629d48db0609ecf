#pragma once

// Corner probing with the exponential solution: manufactured corner fields,
// the integration-by-parts identity, corner-value extraction from scaled
// moments, the witness sweep of a scene and the decay of the boundary functional.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "elastic_core.hpp"
#include "errors.hpp"
#include "fitting.hpp"
#include "geometry.hpp"
#include "jet.hpp"
#include "parallel.hpp"
#include "polynomial.hpp"
#include "probe.hpp"
#include "quadrature.hpp"
#include "scene.hpp"
#include "volume_potential.hpp"

namespace elasticorner {

/// Default sharpness grid of the extraction and witness sweeps.
inline std::vector<double> default_s_grid() { return {8.0, 12.0, 16.0, 24.0, 32.0}; }

inline void require_s_grid(const std::vector<double>& s, std::size_t min_points, const char* who) {
    if (s.size() < min_points)
        throw DomainError(std::string(who) + ": s grid needs at least " + std::to_string(min_points) + " points");
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s[i] > 0.0)) throw DomainError(std::string(who) + ": s values must be positive");
        if (i > 0 && !(s[i] > s[i - 1])) throw DomainError(std::string(who) + ": s grid must increase strictly");
    }
}

/// Largest useful s for a chart: exp(-delta s sqrt(h)) stays above the underflow floor.
inline double s_cap(const CornerChart& chart) {
    return 700.0 * std::log(10.0) / (chart.sector.delta() * std::sqrt(chart.h));
}

namespace detail {

struct Quintic {
    double value, d1, d2;
};

// 1 on [0, h/2], 0 on [h, inf), C^2 in between.
inline Quintic quintic_envelope(double rho, double h) {
    const double half = 0.5 * h;
    if (rho <= half) return {1.0, 0.0, 0.0};
    if (rho >= h) return {0.0, 0.0, 0.0};
    const double t = (rho - half) / half;
    const double S = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    const double S1 = 30.0 * t * t * (1.0 - t) * (1.0 - t);
    const double S2 = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
    return {1.0 - S, -S1 / half, -S2 / (half * half)};
}

// Polar rule on the annular sector r_in < rho < r_out; graded toward 0 when r_in == 0.
inline Rule2 sector_annulus_rule(const Sector& K, double r_in, double r_out, int radial_order, int angular_order,
                                 int angular_panels, int levels = 40) {
    Rule2 r;
    r.tag = DomainTag::SectorBall;
    std::vector<std::pair<double, double>> radial;
    if (r_in > 0.0) {
        // geometric panels from r_in outward keep the inner circle resolved
        double lo = r_in;
        while (lo < r_out) {
            const double hi = std::min(r_out, 2.0 * lo);
            for (const auto& n : gauss_on(lo, hi, radial_order)) radial.push_back(n);
            lo = hi;
        }
    } else {
        double outer = r_out;
        for (int k = 0; k < levels; ++k) {
            for (const auto& n : gauss_on(0.5 * outer, outer, radial_order)) radial.push_back(n);
            outer *= 0.5;
        }
        for (const auto& n : gauss_on(0.0, outer, radial_order)) radial.push_back(n);
    }
    const double step = K.opening() / angular_panels;
    for (int p = 0; p < angular_panels; ++p)
        for (const auto& [th, wt] : gauss_on(K.theta_m() + p * step, K.theta_m() + (p + 1) * step, angular_order)) {
            const Vec2 dir(std::cos(th), std::sin(th));
            for (const auto& [rho, wr] : radial) {
                r.nodes.push_back(rho * dir);
                r.weights.push_back(wt * wr * rho);
            }
        }
    return r;
}

}  // namespace detail

/// u(x) = (l1(x) l2(x))^2 chi(|x|) q(x) in chart coordinates, with l1, l2 the
/// unit linear forms of the two cone edges (positive inside the cone) and chi
/// the quintic envelope of radius h. u and grad u vanish on both edges.
class ManufacturedCornerField {
public:
    ManufacturedCornerField(const CornerChart& chart, PolyVec<2> q) : chart_(chart), q_(std::move(q)) {
        const double tm = chart.sector.theta_m(), tM = chart.sector.theta_M();
        l1_ = Vec2(-std::sin(tm), std::cos(tm));
        l2_ = Vec2(std::sin(tM), -std::cos(tM));
    }

    const CornerChart& chart() const { return chart_; }
    const PolyVec<2>& core() const { return q_; }
    double h() const { return chart_.h; }
    Vec2 edge_form(int k) const { return k == 0 ? l1_ : l2_; }

    CVec<2> operator()(const Vec2& x) const {
        const double b = l1_.dot(x) * l2_.dot(x);
        const double env = detail::quintic_envelope(x.norm(), chart_.h).value;
        return (b * b * env) * evaluate(q_, x);
    }

    JetVec<2> operator()(const JetVec<2>& x) const {
        const Jet<2> b = (x[0] * l1_.x() + x[1] * l1_.y()) * (x[0] * l2_.x() + x[1] * l2_.y());
        Jet<2> env(1.0);
        const double rho = std::hypot(x[0].v.real(), x[1].v.real());
        if (rho > 0.5 * chart_.h) {
            const auto e = detail::quintic_envelope(rho, chart_.h);
            env = compose(sqrt(x[0] * x[0] + x[1] * x[1]), e.value, e.d1, e.d2);
        }
        const Jet<2> scale = b * b * env;
        return JetVec<2>{scale * q_[0](x), scale * q_[1](x)};
    }

    JetField<2> jet_field() const {
        return [self = *this](const JetVec<2>& x) { return self(x); };
    }

    /// Largest |u| and |T_nu u| on n points per edge (inside the envelope support).
    std::pair<double, double> edge_residuals(const LameParameters& m, int n = 50) const {
        double umax = 0.0, tmax = 0.0;
        const auto field = jet_field();
        for (int k = 0; k < 2; ++k) {
            const double th = k == 0 ? chart_.sector.theta_m() : chart_.sector.theta_M();
            const Vec2 dir(std::cos(th), std::sin(th));
            const Vec2 nu = k == 0 ? Vec2(-l1_) : Vec2(-l2_);
            for (int j = 1; j <= n; ++j) {
                const Vec2 x = (chart_.h * j / (n + 1.0)) * dir;
                umax = std::max(umax, (*this)(x).norm());
                tmax = std::max(tmax, boundary_traction<2>(field, m, x, nu).norm());
            }
        }
        return {umax, tmax};
    }

private:
    CornerChart chart_;
    PolyVec<2> q_;
    Vec2 l1_, l2_;
};

/// Builds the field and checks on 50 points per edge that |u| <= 1e-14 and |T_nu u| <= 1e-10.
inline ManufacturedCornerField build_manufactured(const CornerChart& chart, PolyVec<2> q,
                                                  const LameParameters& material) {
    if (!(chart.h > 0.0)) throw GeometryError("build_manufactured: chart radius must be positive");
    ManufacturedCornerField field(chart, std::move(q));
    double scale = 1.0;
    for (const auto& p : field.core())
        for (const auto& [e, c] : p.terms()) scale = std::max(scale, std::abs(c));
    const auto [umax, tmax] = field.edge_residuals(material);
    if (umax > 1e-14 * scale || tmax > 1e-10 * scale)
        throw Error("build_manufactured: field does not vanish on the cone edges (|u| = " + std::to_string(umax) +
                    ", |T u| = " + std::to_string(tmax) + ")");
    return field;
}

struct CornerIdentityReport {
    double s = 0.0;
    double radius = 0.0;         ///< ball radius of the identity
    cplx lhs = 0.0;              ///< integral of v . L u over K cap B
    cplx rhs = 0.0;              ///< arc integral of (C u) . v - (C v) . u
    double abs_error = 0.0;
    double rel_error = 0.0;
    std::vector<double> eps;             ///< inner radii
    std::vector<cplx> inner_circle;      ///< contribution of |x| = eps with nu = -x/|x|
    std::vector<double> punctured_error; ///< |LHS_eps - RHS - inner| / |LHS|
    bool inner_decreasing = true;
    std::string warning;
};

namespace detail {

inline cplx arc_functional(const JetField<2>& u, const ExponentialProbe& probe, const LameParameters& m,
                           const Sector& K, double radius, bool inward, OperatorConvention conv, int order,
                           int panels) {
    const JetField<2> v = probe_jet_field(probe);
    cplx acc = 0.0;
    const double step = K.opening() / panels;
    for (int p = 0; p < panels; ++p)
        for (const auto& [th, w] : gauss_on(K.theta_m() + p * step, K.theta_m() + (p + 1) * step, order)) {
            const Vec2 dir(std::cos(th), std::sin(th));
            const Vec2 x = radius * dir;
            const Vec2 nu = inward ? Vec2(-dir) : dir;
            const JetVec<2> uj = u(seed<2>(x)), vj = v(seed<2>(x));
            CMat<2> Ju, Jv;
            CVec<2> uu, vv;
            for (int i = 0; i < 2; ++i) {
                Ju.row(i) = uj[i].g.transpose();
                Jv.row(i) = vj[i].g.transpose();
                uu(i) = uj[i].v;
                vv(i) = vj[i].v;
            }
            const CVec<2> cu = conormal_from_jacobian<2>(Ju, m, nu, conv);
            const CVec<2> cv = conormal_from_jacobian<2>(Jv, m, nu, conv);
            acc += (w * radius) * (cu.transpose() * vv - cv.transpose() * uu)(0);
        }
    return acc;
}

}  // namespace detail

/// Checks int_{K cap B(0,r)} v . L u = int_{K cap dB(0,r)} [(C_nu u) . v - (C_nu v) . u] dS,
/// with C the conormal matched to the operator convention and r = radius_factor * h,
/// plus the punctured version over eps < |x| < r.
inline CornerIdentityReport corner_identity_check(const ManufacturedCornerField& field, const ExponentialProbe& probe,
                                                  const LameParameters& material, const std::vector<double>& eps_grid,
                                                  OperatorConvention conv = OperatorConvention::Paper,
                                                  double radius_factor = 0.75) {
    const Sector& K = field.chart().sector;
    const double h = field.h();
    if (!(radius_factor > 0.0 && radius_factor <= 1.0)) throw DomainError("corner_identity_check: bad radius factor");
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > 0.0 && eps_grid[i] < h)) throw DomainError("corner_identity_check: eps must lie in (0, h)");
        if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) throw DomainError("corner_identity_check: eps grid must decrease");
    }
    CornerIdentityReport rep;
    rep.s = probe.s;
    const double r = radius_factor * h;
    rep.radius = r;
    const JetField<2> u = field.jet_field();
    const double reach = probe.s * std::sqrt(r);
    const int panels = std::max(2, static_cast<int>(std::ceil(reach * K.opening() / 4.0)));
    const int order = 24;

    const double knee = std::min(0.5 * h, r);
    const JetField<2> v = probe_jet_field(probe);
    auto integrand = [&](const Vec2& x) -> cplx {
        const CVec<2> lu = navier_apply<2>(u, material, x, conv);
        return (probe_eval(x, probe).transpose() * lu)(0);
    };
    auto integrate = [&](double r_in, double r_out) {
        if (!(r_out > r_in)) return cplx(0.0);
        return detail::sector_annulus_rule(K, r_in, r_out, order, order, panels).integrate(integrand);
    };
    // the envelope kink sits at h/2: integrate the two pieces separately
    const cplx outer = integrate(knee, r);
    rep.lhs = integrate(0.0, knee) + outer;
    rep.rhs = detail::arc_functional(u, probe, material, K, r, false, conv, 2 * order, panels);
    rep.abs_error = std::abs(rep.lhs - rep.rhs);
    const double denom = std::max(std::abs(rep.lhs), std::abs(rep.rhs));
    rep.rel_error = denom > 0.0 ? rep.abs_error / denom : 0.0;

    for (double e : eps_grid) {
        const cplx inner = detail::arc_functional(u, probe, material, K, e, true, conv, 2 * order, panels);
        const cplx lhs_eps = e < knee ? integrate(e, knee) + outer : integrate(e, r);
        rep.eps.push_back(e);
        rep.inner_circle.push_back(inner);
        rep.punctured_error.push_back(denom > 0.0 ? std::abs(lhs_eps - rep.rhs - inner) / denom : 0.0);
    }
    for (std::size_t i = 1; i < rep.inner_circle.size(); ++i)
        if (!(std::abs(rep.inner_circle[i]) < std::abs(rep.inner_circle[i - 1]) ||
              std::abs(rep.inner_circle[i]) == 0.0))
            rep.inner_decreasing = false;
    if (rep.rel_error > 1e-6) rep.warning = "quadrature budget exceeded";
    return rep;
}

/// Result of the scaled-moment sweep s^4 int_{K cap B} v . f.
struct MomentExtraction {
    std::vector<double> s_grid;
    std::vector<cplx> scaled_moments;  ///< M(s)
    std::vector<cplx> profile;         ///< g(s) = s^4 int_{K cap B} v_1 / C_K, the truncated constant response
    cplx fitted_limit = 0.0;           ///< lim M(s)
    cplx corner_constant = 0.0;        ///< C_K
    cplx estimate = 0.0;               ///< (f_1 + i f_2)(0)
    double rotation = 0.0;             ///< chart rotation, 0 when the density is given in chart components
    double decay_slope = std::numeric_limits<double>::quiet_NaN();  ///< slope of log|M| against log s
    double fit_residual = 0.0;

    /// estimate rotated back to the components of the scene.
    cplx global_estimate() const { return estimate * std::polar(1.0, rotation); }
};

using LocalField = std::function<CVec<2>(const Vec2&)>;

namespace detail {

// Responses of the truncated cone ball to 1, x_1 and x_2: s^4 int_{K cap B} v_1 {1, x_1, x_2},
// the first divided by C_K.
struct TruncatedResponse {
    cplx constant = 0.0;
    cplx linear[2] = {0.0, 0.0};
};

// Fits M(s) ~ c0 g(s) + (linear responses when alpha = 1, else c1 s^{-2 alpha}),
// with one more power of s^{-2 alpha} when the grid has at least 6 points.
inline LinearFit fit_moment_ladder(const std::vector<double>& s, const std::vector<cplx>& M,
                                   const std::vector<TruncatedResponse>& g, double alpha) {
    const int n = static_cast<int>(s.size());
    const bool lipschitz = alpha == 1.0;
    const int base = lipschitz ? 3 : 2;
    const int cols = std::min(n, n >= 6 ? base + 1 : base);
    CMatX A(n, cols);
    CVecX b(n);
    Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
    for (int i = 0; i < n; ++i) {
        const double t = std::pow(s[i], -2.0 * alpha);
        std::vector<cplx> row{g[i].constant};
        if (lipschitz) {
            row.push_back(g[i].linear[0]);
            row.push_back(g[i].linear[1]);
            row.push_back(t * t);
        } else {
            row.push_back(t);
            row.push_back(t * t);
        }
        for (int k = 0; k < cols; ++k) A(i, k) = row[k];
        b(i) = M[i];
    }
    return weighted_least_squares(A, b, w);
}

inline TruncatedResponse accumulate_response(const TruncatedResponse& acc, double w, cplx v1, const Vec2& y) {
    TruncatedResponse r = acc;
    r.constant += w * v1;
    r.linear[0] += w * v1 * y.x();
    r.linear[1] += w * v1 * y.y();
    return r;
}

inline TruncatedResponse scale_response(TruncatedResponse r, double s, cplx CK) {
    const double s4 = std::pow(s, 4);
    r.constant *= s4 / CK;
    r.linear[0] *= s4;
    r.linear[1] *= s4;
    return r;
}

inline Rule2 moment_rule(const Sector& K, double s, double h) { return probe_sector_rule(K, s, h); }

}  // namespace detail

/// Corner value (f_1 + i f_2)(0) from the scaled moments of a density given in
/// chart coordinates. The ladder holds the truncated responses of the cone
/// ball to constant and linear densities (alpha = 1), or the s^{-2 alpha}
/// correction of a C^alpha density.
inline MomentExtraction moment_extract(const LocalField& f, const CornerChart& chart,
                                       const std::vector<double>& s_grid = default_s_grid(), double alpha = 1.0) {
    const cplx CK = sector_moment_constant(chart.sector);
    if (CK == cplx(0.0)) throw DegenerateConeError("moment_extract: opening pi gives C_K = 0");
    require_s_grid(s_grid, 3, "moment_extract");
    if (s_grid.back() > s_cap(chart)) throw AccuracyError("moment_extract: s exceeds the underflow cap");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("moment_extract: alpha must lie in (0, 1]");
    MomentExtraction out;
    out.s_grid = s_grid;
    out.corner_constant = CK;
    const std::size_t n = s_grid.size();
    out.scaled_moments.resize(n);
    out.profile.resize(n);
    std::vector<detail::TruncatedResponse> resp(n);
    parallel_for(n, [&](std::size_t i) {
        const double s = s_grid[i];
        const ExponentialProbe p(s);
        const Rule2 rule = detail::moment_rule(chart.sector, s, chart.h);
        cplx m = 0.0;
        detail::TruncatedResponse g;
        for (std::size_t j = 0; j < rule.size(); ++j) {
            const cplx v1 = probe_scalar(rule.nodes[j], p);
            const CVec<2> fv = f(rule.nodes[j]);
            m += rule.weights[j] * v1 * (fv(0) + cplx(0.0, 1.0) * fv(1));
            g = detail::accumulate_response(g, rule.weights[j], v1, rule.nodes[j]);
        }
        out.scaled_moments[i] = std::pow(s, 4) * m;
        resp[i] = detail::scale_response(g, s, CK);
        out.profile[i] = resp[i].constant;
    });
    const LinearFit fit = detail::fit_moment_ladder(s_grid, out.scaled_moments, resp, alpha);
    out.fitted_limit = fit.coefficients(0);
    out.fit_residual = fit.residual_norm;
    out.estimate = out.fitted_limit / CK;
    std::vector<double> mag;
    for (const cplx& m : out.scaled_moments) mag.push_back(std::abs(m));
    if (std::all_of(mag.begin(), mag.end(), [](double x) { return x > 0.0; }))
        out.decay_slope = loglog_slope(s_grid, mag).slope;
    return out;
}

inline MomentExtraction moment_extract(const PolyVec<2>& f, const CornerChart& chart,
                                       const std::vector<double>& s_grid = default_s_grid(), double alpha = 1.0) {
    return moment_extract([f](const Vec2& x) { return evaluate(f, x); }, chart, s_grid, alpha);
}

/// Scalar density g: the estimate is g(0).
inline MomentExtraction moment_extract(const std::function<cplx(const Vec2&)>& g, const CornerChart& chart,
                                       const std::vector<double>& s_grid = default_s_grid(), double alpha = 1.0) {
    return moment_extract([g](const Vec2& x) { return CVec<2>(g(x), 0.0); }, chart, s_grid, alpha);
}

struct WitnessOptions {
    int angular_nodes = 16;   ///< Gauss nodes in angle of the sampling grid of u
    int radial_levels = 8;    ///< halvings toward the vertex
    int radial_order = 10;    ///< Gauss nodes per radial panel
};

/// W(s) = s^4 int_{K cap B} v . (f - omega^2 u) with u the radiated field, split
/// into the source channel and the field channel.
struct WitnessSweep {
    std::vector<double> s_grid;
    std::vector<cplx> values;          ///< W(s)
    std::vector<cplx> source_channel;  ///< s^4 int v . f
    std::vector<cplx> field_channel;   ///< -omega^2 s^4 int v . u
    cplx fitted_limit = 0.0;
    cplx source_limit = 0.0;
    cplx field_limit = 0.0;
    double decay_exponent = std::numeric_limits<double>::quiet_NaN();  ///< slope of log|W| against log s
    cplx corner_constant = 0.0;
    cplx corner_value = 0.0;           ///< (f_1 + i f_2)(x_c) in chart components
    double discrepancy = 0.0;          ///< |lim W - C_K f(x_c)|
    double max_abs_value = 0.0;
};

namespace detail {

// Barycentric weights of Gauss nodes for Lagrange interpolation.
inline std::vector<double> barycentric_weights(const std::vector<double>& x) {
    std::vector<double> w(x.size(), 1.0);
    for (std::size_t j = 0; j < x.size(); ++j)
        for (std::size_t k = 0; k < x.size(); ++k)
            if (k != j) w[j] /= (x[j] - x[k]);
    return w;
}

template <class T>
T barycentric(const std::vector<double>& x, const std::vector<double>& w, const std::vector<T>& f, double t) {
    T num = f[0] * 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double d = t - x[j];
        if (d == 0.0) return f[j];
        const double c = w[j] / d;
        num += c * f[j];
        den += c;
    }
    return num / den;
}

// Tensor polar interpolant of a field on K cap B(0, h): Gauss nodes in angle,
// geometric Gauss panels in radius.
class PolarInterpolant {
public:
    PolarInterpolant(const Sector& K, double h, const WitnessOptions& o, const std::function<CVec<2>(const Vec2&)>& f)
        : K_(K), h_(h), levels_(o.radial_levels) {
        for (const auto& [t, w] : gauss_on(K.theta_m(), K.theta_M(), o.angular_nodes)) theta_.push_back(t);
        wt_ = barycentric_weights(theta_);
        double outer = h;
        for (int k = 0; k <= levels_; ++k) {
            const double inner = k == levels_ ? 0.0 : 0.5 * outer;
            std::vector<double> r;
            for (const auto& [x, w] : gauss_on(inner, outer, o.radial_order)) r.push_back(x);
            radii_.push_back(r);
            wr_.push_back(barycentric_weights(r));
            outer = inner;
        }
        // samples[panel][radial][angular]
        std::vector<Vec2> pts;
        for (const auto& r : radii_)
            for (double rho : r)
                for (double th : theta_) pts.push_back(rho * Vec2(std::cos(th), std::sin(th)));
        std::vector<CVec<2>> vals(pts.size());
        parallel_for(pts.size(), [&](std::size_t i) { vals[i] = f(pts[i]); });
        std::size_t idx = 0;
        values_.resize(radii_.size());
        for (std::size_t p = 0; p < radii_.size(); ++p) {
            values_[p].resize(radii_[p].size());
            for (std::size_t i = 0; i < radii_[p].size(); ++i) {
                values_[p][i].assign(vals.begin() + idx, vals.begin() + idx + theta_.size());
                idx += theta_.size();
            }
        }
    }

    std::size_t sample_count() const { return radii_.size() * radii_.front().size() * theta_.size(); }

    CVec<2> operator()(const Vec2& x) const {
        const double rho = x.norm();
        const double th = std::atan2(x.y(), x.x());
        std::size_t p = 0;
        double outer = h_;
        while (p + 1 < radii_.size() && rho < 0.5 * outer) {
            outer *= 0.5;
            ++p;
        }
        std::vector<CVec<2>> col(radii_[p].size());
        for (std::size_t i = 0; i < radii_[p].size(); ++i) col[i] = barycentric(theta_, wt_, values_[p][i], th);
        return barycentric(radii_[p], wr_[p], col, rho);
    }

private:
    Sector K_;
    double h_;
    int levels_;
    std::vector<double> theta_, wt_;
    std::vector<std::vector<double>> radii_, wr_;
    std::vector<std::vector<std::vector<CVec<2>>>> values_;
};

inline CVec<2> to_local_components(const CornerChart& c, const CVec<2>& g) {
    const double ca = std::cos(c.rotation), sa = std::sin(c.rotation);
    return {ca * g(0) + sa * g(1), -sa * g(0) + ca * g(1)};
}

}  // namespace detail

/// Witness sweep of a planar scene on the cone ball of the given chart.
inline WitnessSweep witness(const SourceScene& scene, const CornerChart& chart,
                            const std::vector<double>& s_grid = default_s_grid(), double alpha = 1.0,
                            const WitnessOptions& opt = {}) {
    if (scene.dim() != 2) throw CapabilityError("witness: planar scenes only");
    const cplx CK = sector_moment_constant(chart.sector);
    if (CK == cplx(0.0)) throw DegenerateConeError("witness: opening pi gives C_K = 0");
    require_s_grid(s_grid, 4, "witness");
    if (s_grid.back() > s_cap(chart)) throw AccuracyError("witness: s exceeds the underflow cap");

    const VolumePotential vp(scene);
    const double w2 = scene.freq().omega * scene.freq().omega;
    auto f_local = [&](const Vec2& y) { return detail::to_local_components(chart, scene.source(chart.to_global(y))); };
    const detail::PolarInterpolant u_local(chart.sector, chart.h, opt, [&](const Vec2& y) {
        return scene.density_is_zero() ? CVec<2>(CVec<2>::Zero())
                                       : detail::to_local_components(chart, vp(chart.to_global(y)));
    });

    WitnessSweep out;
    out.s_grid = s_grid;
    out.corner_constant = CK;
    const bool vertex_in_support = scene.distance_to_support(chart.vertex) == 0.0;
    const CVec<2> fc = vertex_in_support ? detail::to_local_components(chart, evaluate(scene.density(), chart.vertex))
                                         : CVec<2>(CVec<2>::Zero());
    out.corner_value = fc(0) + cplx(0.0, 1.0) * fc(1);
    const std::size_t n = s_grid.size();
    out.values.resize(n);
    out.source_channel.resize(n);
    out.field_channel.resize(n);
    std::vector<detail::TruncatedResponse> profile(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = s_grid[i];
        const ExponentialProbe p(s);
        const Rule2 rule = detail::moment_rule(chart.sector, s, chart.h);
        cplx src = 0.0, fld = 0.0;
        detail::TruncatedResponse g;
        for (std::size_t j = 0; j < rule.size(); ++j) {
            const Vec2& y = rule.nodes[j];
            const cplx v1 = probe_scalar(y, p);
            const CVec<2> fy = f_local(y);
            const CVec<2> uy = u_local(y);
            src += rule.weights[j] * v1 * (fy(0) + cplx(0.0, 1.0) * fy(1));
            fld += rule.weights[j] * v1 * (uy(0) + cplx(0.0, 1.0) * uy(1));
            g = detail::accumulate_response(g, rule.weights[j], v1, y);
        }
        const double s4 = std::pow(s, 4);
        out.source_channel[i] = s4 * src;
        out.field_channel[i] = -w2 * s4 * fld;
        out.values[i] = out.source_channel[i] + out.field_channel[i];
        profile[i] = detail::scale_response(g, s, CK);
        out.max_abs_value = std::max(out.max_abs_value, std::abs(out.values[i]));
    }
    out.fitted_limit = detail::fit_moment_ladder(s_grid, out.values, profile, alpha).coefficients(0);
    out.source_limit = detail::fit_moment_ladder(s_grid, out.source_channel, profile, alpha).coefficients(0);
    out.field_limit = detail::fit_moment_ladder(s_grid, out.field_channel, profile, alpha).coefficients(0);
    out.discrepancy = std::abs(out.fitted_limit - CK * out.corner_value);
    std::vector<double> mag;
    for (const cplx& w : out.values) mag.push_back(std::abs(w));
    if (std::all_of(mag.begin(), mag.end(), [](double x) { return x > 0.0; }))
        out.decay_exponent = loglog_slope(s_grid, mag).slope;
    return out;
}

/// Witness at a polygon vertex, using the chart of that vertex.
inline WitnessSweep witness(const SourceScene& scene, int vertex_index,
                            const std::vector<double>& s_grid = default_s_grid(), const WitnessOptions& opt = {}) {
    if (!scene.is_polygon()) throw CapabilityError("witness: vertex form needs a polygon scene");
    const int n = static_cast<int>(scene.polygon().size());
    if (vertex_index < 0 || vertex_index >= n) throw DomainError("witness: vertex index out of range");
    return witness(scene, corner_chart(scene.polygon(), vertex_index), s_grid, scene.holder_alpha(), opt);
}

/// Moment extraction of a polygon scene density at one of its vertices, in chart components.
/// global_estimate() gives the corner value in the components of the scene.
inline MomentExtraction moment_extract(const SourceScene& scene, int vertex_index,
                                       const std::vector<double>& s_grid = default_s_grid()) {
    if (!scene.is_polygon()) throw CapabilityError("moment_extract: vertex form needs a polygon scene");
    const int n = static_cast<int>(scene.polygon().size());
    if (vertex_index < 0 || vertex_index >= n) throw DomainError("moment_extract: vertex index out of range");
    const CornerChart chart = corner_chart(scene.polygon(), vertex_index);
    const PolyVec<2> f = scene.density();
    MomentExtraction out = moment_extract(
        [f, chart](const Vec2& y) { return detail::to_local_components(chart, evaluate(f, chart.to_global(y))); },
        chart, s_grid, scene.holder_alpha());
    out.rotation = chart.rotation;
    return out;
}

/// Dirichlet and conormal samples on an arc K cap dB(center, radius), outward normal.
struct CauchyData {
    Sector sector = Sector::symmetric(std::numbers::pi / 2);
    Vec2 center = Vec2::Zero();
    double radius = 1.0;
    std::vector<double> theta;
    std::vector<double> weights;  ///< arc-length weights
    std::vector<CVec<2>> u;
    std::vector<CVec<2>> conormal;
};

/// Samples a manufactured field on the arc of the given radius.
inline CauchyData cauchy_data(const ManufacturedCornerField& field, const LameParameters& m, double radius,
                              OperatorConvention conv = OperatorConvention::Paper, int order = 48, int panels = 4) {
    if (!(radius > 0.0)) throw GeometryError("cauchy_data: radius must be positive");
    CauchyData d;
    d.sector = field.chart().sector;
    d.radius = radius;
    const JetField<2> u = field.jet_field();
    const double step = d.sector.opening() / panels;
    for (int p = 0; p < panels; ++p)
        for (const auto& [th, w] : gauss_on(d.sector.theta_m() + p * step, d.sector.theta_m() + (p + 1) * step, order)) {
            const Vec2 dir(std::cos(th), std::sin(th));
            const Vec2 x = radius * dir;
            d.theta.push_back(th);
            d.weights.push_back(w * radius);
            d.u.push_back(field(x));
            d.conormal.push_back(conormal_from_jacobian<2>(jacobian<2>(u, x), m, dir, conv));
        }
    return d;
}

/// B(s) = int_{K cap dB} [(C_nu u) . v - (C_nu v) . u] dS from sampled data.
inline cplx boundary_functional(const CauchyData& d, double s, const LameParameters& m,
                                OperatorConvention conv = OperatorConvention::Paper) {
    if (d.center.norm() != 0.0) throw GeometryError("boundary_functional: arc must be centred at the vertex");
    const ExponentialProbe p(s);
    const JetField<2> v = probe_jet_field(p);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < d.theta.size(); ++j) {
        const Vec2 dir(std::cos(d.theta[j]), std::sin(d.theta[j]));
        const Vec2 x = d.radius * dir;
        const CVec<2> vv = probe_eval(x, p);
        const CVec<2> cv = conormal_from_jacobian<2>(jacobian<2>(v, x), m, dir, conv);
        acc += d.weights[j] * ((d.conormal[j].transpose() * vv)(0) - (cv.transpose() * d.u[j])(0));
    }
    return acc;
}

struct DecayFit {
    std::vector<double> s_grid;
    std::vector<cplx> values;
    double fitted_rate = std::numeric_limits<double>::quiet_NaN();  ///< -kappa of e^{-kappa s}
    double linear_rate = std::numeric_limits<double>::quiet_NaN();  ///< slope of log|B| against s
    double theory_rate = 0.0;                                        ///< -delta_K sqrt(r)
    double fit_residual = 0.0;
    bool zero_data = false;
};

/// Fits B(s) ~ sum_{ends} sum_{j<3} A s^{-2-j} e^{-kappa s} e^{-i s sqrt(r) sin(theta_end / 2)}
/// by variable projection in kappa, and a straight line to log|B|.
inline DecayFit boundary_functional_decay(const CauchyData& d, const std::vector<double>& s_grid,
                                          const LameParameters& m,
                                          OperatorConvention conv = OperatorConvention::Paper) {
    if (d.center.norm() != 0.0) throw GeometryError("boundary_functional_decay: arc must be centred at the vertex");
    require_s_grid(s_grid, 4, "boundary_functional_decay");
    DecayFit out;
    out.s_grid = s_grid;
    const double sr = std::sqrt(d.radius);
    out.theory_rate = -d.sector.delta() * sr;
    out.values.resize(s_grid.size());
    parallel_for(s_grid.size(), [&](std::size_t i) { out.values[i] = boundary_functional(d, s_grid[i], m, conv); });
    std::vector<double> mag;
    for (const cplx& b : out.values) mag.push_back(std::abs(b));
    if (std::any_of(mag.begin(), mag.end(), [](double x) { return x == 0.0; })) {
        out.zero_data = true;
        return out;
    }
    std::vector<double> logs;
    for (double x : mag) logs.push_back(std::log(x));
    out.linear_rate = linear_regression(s_grid, logs).slope;

    const double phases[2] = {sr * std::sin(0.5 * d.sector.theta_m()), sr * std::sin(0.5 * d.sector.theta_M())};
    std::vector<double> w;
    for (double x : mag) w.push_back(1.0 / x);
    const double k0 = -out.theory_rate;
    const auto fit = variable_projection_fit(
        s_grid, out.values, w,
        [&](double s, double kappa) {
            std::vector<cplx> row;
            for (double ph : phases)
                for (int j = 0; j < 3; ++j)
                    row.push_back(std::pow(s, -2.0 - j) * std::exp(cplx(-kappa * s, -ph * s)));
            return row;
        },
        0.25 * k0, 3.0 * k0);
    out.fitted_rate = -fit.parameter;
    out.fit_residual = fit.relative_residual;
    return out;
}

}  // namespace elasticorner
