#pragma once

// Partial Fourier transform R_xi g(x') = int e^{-i x3 xi} phi(x3) g(x', x3) dx3
// turning an edge of a prism into a planar corner.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "corner_indicator.hpp"
#include "elastic_core.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "jet.hpp"
#include "polynomial.hpp"
#include "quadrature.hpp"

namespace elasticorner {

/// Frequency xi and the bump phi(t) = exp(1 - 1 / (1 - ((t - center) / width)^2)) on (-L, L).
struct DimensionReductionSpec {
    double xi = 0.0;
    double L = 1.0;
    double center = 0.0;
    double width = 0.9;

    void validate() const {
        if (!std::isfinite(xi)) throw DomainError("DimensionReductionSpec: xi must be finite");
        if (!(L > 0.0)) throw DomainError("DimensionReductionSpec: L must be positive");
        if (!(width > 0.0)) throw DomainError("DimensionReductionSpec: width must be positive");
        if (!(center - width > -L && center + width < L))
            throw DomainError("DimensionReductionSpec: cutoff support must lie strictly inside (-L, L)");
    }

    DimensionReductionSpec with_xi(double x) const {
        DimensionReductionSpec s = *this;
        s.xi = x;
        return s;
    }
};

struct CutoffValue {
    double phi, d1, d2;
};

inline CutoffValue cutoff(const DimensionReductionSpec& spec, double t) {
    const double tau = (t - spec.center) / spec.width;
    if (std::abs(tau) >= 1.0) return {0.0, 0.0, 0.0};
    const double q = 1.0 - tau * tau;
    const double g1 = -2.0 * tau / (q * q);
    const double g2 = -2.0 / (q * q) - 8.0 * tau * tau / (q * q * q);
    const double phi = std::exp(1.0 - 1.0 / q);
    const double w = spec.width;
    return {phi, phi * g1 / w, phi * (g1 * g1 + g2) / (w * w)};
}

/// Nodes t_j and weights w_j e^{-i t_j xi} over the cutoff support, with at
/// least 10 nodes per period of e^{-i t xi}.
struct ReductionRule {
    std::vector<double> t;
    std::vector<double> w;
    std::vector<cplx> phase;  ///< e^{-i t xi}
};

inline ReductionRule reduction_rule(const DimensionReductionSpec& spec, int max_nodes = 8192) {
    spec.validate();
    const int order = 16;
    const double len = 2.0 * spec.width;
    const double periods = std::abs(spec.xi) * len / (2.0 * std::numbers::pi);
    const int panels = std::max(8, static_cast<int>(std::ceil(10.0 * periods / order)) + 1);
    if (panels * order > max_nodes) throw AccuracyError("dimension_reduce: xi too large for the node budget");
    ReductionRule r;
    const double a = spec.center - spec.width;
    for (int p = 0; p < panels; ++p)
        for (const auto& [t, w] : gauss_on(a + len * p / panels, a + len * (p + 1) / panels, order)) {
            r.t.push_back(t);
            r.w.push_back(w);
            r.phase.push_back(std::exp(cplx(0.0, -t * spec.xi)));
        }
    return r;
}

/// R_xi g at one point x'. g(x', x3) may return a scalar or an Eigen vector.
template <class G>
auto dimension_reduce(const G& g, const Vec2& xp, const DimensionReductionSpec& spec) {
    const ReductionRule r = reduction_rule(spec);
    using V = std::decay_t<decltype(g(xp, 0.0))>;
    using R = std::conditional_t<std::is_arithmetic_v<V>, cplx, V>;
    R acc = R(g(xp, r.t[0])) * cplx(0.0);
    for (std::size_t j = 0; j < r.t.size(); ++j) acc += g(xp, r.t[j]) * (r.w[j] * cutoff(spec, r.t[j]).phi * r.phase[j]);
    return acc;
}

/// int e^{-i t xi} phi(t) t^k dt.
inline cplx cutoff_moment(const DimensionReductionSpec& spec, int k) {
    const ReductionRule r = reduction_rule(spec);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < r.t.size(); ++j)
        acc += r.w[j] * cutoff(spec, r.t[j]).phi * std::pow(r.t[j], k) * r.phase[j];
    return acc;
}

/// R_xi of a polynomial in (x1, x2, x3): a polynomial in (x1, x2).
inline Polynomial<2> reduce_polynomial(const Polynomial<3>& p, const DimensionReductionSpec& spec) {
    std::vector<cplx> moments;
    Polynomial<2> out;
    for (const auto& [e, c] : p.terms()) {
        while (static_cast<int>(moments.size()) <= e[2]) moments.push_back(cutoff_moment(spec, static_cast<int>(moments.size())));
        out.add_term({e[0], e[1]}, c * moments[e[2]]);
    }
    return out;
}

/// Prism field u(x', x3) = (l1(x') l2(x'))^2 chi(|x'|) q(x', x3); u and grad u
/// vanish on the two edge faces.
class PrismField {
public:
    PrismField(const CornerChart& chart, PolyVec<3> q) : planar_(chart, PolyVec<2>{}), q_(std::move(q)) {}

    const CornerChart& chart() const { return planar_.chart(); }
    const PolyVec<3>& core() const { return q_; }

    CVec<3> operator()(const Vec3& x) const {
        const Vec2 xp = x.head<2>();
        const Vec2 l1 = planar_.edge_form(0), l2 = planar_.edge_form(1);
        const double b = l1.dot(xp) * l2.dot(xp);
        const double env = detail::quintic_envelope(xp.norm(), chart().h).value;
        return (b * b * env) * evaluate(q_, x);
    }

    JetVec<3> operator()(const JetVec<3>& x) const {
        const Vec2 l1 = planar_.edge_form(0), l2 = planar_.edge_form(1);
        const Jet<3> b = (x[0] * l1.x() + x[1] * l1.y()) * (x[0] * l2.x() + x[1] * l2.y());
        Jet<3> env(1.0);
        const double rho = std::hypot(x[0].v.real(), x[1].v.real());
        if (rho > 0.5 * chart().h) {
            const auto e = detail::quintic_envelope(rho, chart().h);
            env = compose(sqrt(x[0] * x[0] + x[1] * x[1]), e.value, e.d1, e.d2);
        }
        const Jet<3> scale = b * b * env;
        return JetVec<3>{scale * q_[0](x), scale * q_[1](x), scale * q_[2](x)};
    }

    JetField<3> jet_field() const {
        return [self = *this](const JetVec<3>& x) { return self(x); };
    }

private:
    ManufacturedCornerField planar_;
    PolyVec<3> q_;
};

/// Reduced operator: a Delta' on all three components plus (lambda + mu) grad' div'
/// on the first two, by central differences of step h; a = lambda (paper) or mu.
inline CVec<3> reduced_operator_fd(const std::function<CVec<3>(const Vec2&)>& U, const LameParameters& m,
                                   const Vec2& x, double h, OperatorConvention conv = OperatorConvention::Paper) {
    const Vec2 e1(h, 0), e2(0, h);
    const CVec<3> u0 = U(x);
    const CVec<3> d11 = (U(x + e1) - 2.0 * u0 + U(x - e1)) / (h * h);
    const CVec<3> d22 = (U(x + e2) - 2.0 * u0 + U(x - e2)) / (h * h);
    const CVec<3> d12 = (U(x + e1 + e2) - U(x + e1 - e2) - U(x - e1 + e2) + U(x - e1 - e2)) / (4.0 * h * h);
    const double a = m.laplace_coefficient(conv), b = m.lambda() + m.mu();
    CVec<3> out = a * (d11 + d22);
    out(0) += b * (d11(0) + d12(1));
    out(1) += b * (d12(0) + d22(1));
    return out;
}

struct ReducedEquationSample {
    Vec2 point;
    bool on_gamma = false;
    CVec<3> F;          ///< reduced operator applied to R_xi u
    CVec<3> Rf;         ///< R_xi f
    CVec<3> correction; ///< I_xi + II_xi
};

struct ReducedEquationReport {
    double xi = 0.0;
    std::vector<ReducedEquationSample> samples;
    double gamma_residual = 0.0;     ///< max |F - R_xi f| on Gamma, relative to scale
    double interior_residual = 0.0;  ///< max |F - R_xi f - I - II| off Gamma, relative to scale
    double interior_gap = 0.0;       ///< max |F - R_xi f| off Gamma, relative to scale
    double trace_max = 0.0;          ///< max |R_xi u| on Gamma
    double traction_max = 0.0;       ///< max |T_nu R_xi u| on Gamma
    double scale = 0.0;              ///< max |R_xi f| over the samples
};

/// Sample points on the two edges of the chart, clear of the vertex.
inline std::vector<Vec2> gamma_samples(const CornerChart& chart, int per_edge = 10, double exclusion = 1e-3) {
    std::vector<Vec2> pts;
    for (double th : {chart.sector.theta_m(), chart.sector.theta_M()}) {
        const Vec2 dir(std::cos(th), std::sin(th));
        for (int j = 0; j < per_edge; ++j) {
            const double r = exclusion + (0.9 * chart.h - exclusion) * (j + 0.5) / per_edge;
            pts.push_back(r * dir);
        }
    }
    return pts;
}

/// Checks F_xi = R_xi f on Gamma for f = L u (+ omega^2 u) of a prism field, with F_xi
/// from finite differences of the reduced operator; off Gamma, checks
/// F_xi = R_xi f + I_xi + II_xi.
inline ReducedEquationReport reduced_equation_check(const PrismField& u, const LameParameters& m,
                                                    const DimensionReductionSpec& spec,
                                                    const std::vector<Vec2>& gamma_points,
                                                    const std::vector<Vec2>& interior_points = {},
                                                    double omega = 0.0, double fd_step = 1e-3,
                                                    OperatorConvention conv = OperatorConvention::Paper) {
    if (m.dim() != 3) throw DomainError("reduced_equation_check: needs a 3D material");
    spec.validate();
    const JetField<3> uj = u.jet_field();
    const ReductionRule rule = reduction_rule(spec);
    const double a = m.laplace_coefficient(conv), b = m.lambda() + m.mu();
    const Eigen::Vector3d diag(a, a, a + b);

    auto reduce = [&](const std::function<CVec<3>(double)>& g, int weight) {
        CVec<3> acc = CVec<3>::Zero();
        for (std::size_t j = 0; j < rule.t.size(); ++j) {
            const CutoffValue c = cutoff(spec, rule.t[j]);
            const double wphi = weight == 0 ? c.phi : (weight == 1 ? c.d1 : c.d2);
            acc += (rule.w[j] * wphi * rule.phase[j]) * g(rule.t[j]);
        }
        return acc;
    };
    const std::function<CVec<3>(const Vec2&)> Ru = [&](const Vec2& xp) {
        return reduce([&](double t) { return u(Vec3(xp.x(), xp.y(), t)); }, 0);
    };
    auto f_at = [&](const Vec2& xp, double t) -> CVec<3> {
        const Vec3 x(xp.x(), xp.y(), t);
        return navier_apply<3>(uj, m, x, conv) + omega * omega * u(x);
    };

    ReducedEquationReport rep;
    rep.xi = spec.xi;
    auto sample = [&](const Vec2& xp, bool on_gamma) {
        ReducedEquationSample smp;
        smp.point = xp;
        smp.on_gamma = on_gamma;
        smp.F = reduced_operator_fd(Ru, m, xp, fd_step, conv);
        smp.Rf = reduce([&](double t) { return f_at(xp, t); }, 0);
        // the omega^2 u term passes through R_xi unchanged, so it joins F
        smp.F += omega * omega * Ru(xp);
        const cplx ixi(0.0, spec.xi);
        auto scaled_u = [&](double t) -> CVec<3> {
            return diag.cast<cplx>().cwiseProduct(u(Vec3(xp.x(), xp.y(), t)));
        };
        auto mixed = [&](double t) -> CVec<3> {
            const CMat<3> J = jacobian<3>(uj, Vec3(xp.x(), xp.y(), t));
            return CVec<3>(J(2, 0), J(2, 1), J(0, 0) + J(1, 1));
        };
        const CVec<3> I = -reduce(scaled_u, 2) + 2.0 * ixi * reduce(scaled_u, 1) + spec.xi * spec.xi * reduce(scaled_u, 0);
        const CVec<3> II = -ixi * b * reduce(mixed, 0) + b * reduce(mixed, 1);
        smp.correction = I + II;
        return smp;
    };
    for (const Vec2& p : gamma_points) rep.samples.push_back(sample(p, true));
    for (const Vec2& p : interior_points) rep.samples.push_back(sample(p, false));
    for (const auto& s : rep.samples) rep.scale = std::max(rep.scale, s.Rf.norm());
    const double scale = rep.scale > 0.0 ? rep.scale : 1.0;
    for (const auto& s : rep.samples) {
        if (s.on_gamma) {
            rep.gamma_residual = std::max(rep.gamma_residual, (s.F - s.Rf).norm() / scale);
            rep.trace_max = std::max(rep.trace_max, Ru(s.point).norm());
            // normal of the edge containing the point
            const double th = std::atan2(s.point.y(), s.point.x());
            const bool lower = std::abs(th - u.chart().sector.theta_m()) < std::abs(th - u.chart().sector.theta_M());
            const Vec2 nu2 = lower ? Vec2(std::sin(th), -std::cos(th)) : Vec2(-std::sin(th), std::cos(th));
            CMat<3> J = CMat<3>::Zero();
            const Vec2 e1(fd_step, 0), e2(0, fd_step);
            J.col(0) = (Ru(s.point + e1) - Ru(s.point - e1)) / (2.0 * fd_step);
            J.col(1) = (Ru(s.point + e2) - Ru(s.point - e2)) / (2.0 * fd_step);
            rep.traction_max =
                std::max(rep.traction_max, traction_from_jacobian<3>(J, m, Vec3(nu2.x(), nu2.y(), 0.0)).norm());
        } else {
            rep.interior_residual = std::max(rep.interior_residual, (s.F - s.Rf - s.correction).norm() / scale);
            rep.interior_gap = std::max(rep.interior_gap, (s.F - s.Rf).norm() / scale);
        }
    }
    return rep;
}

struct EdgeDemoEntry {
    double xi = 0.0;
    CVec<3> reconstructed;  ///< R_xi f(0) from the scaled moments, per component
    CVec<3> direct;         ///< int e^{-i x3 xi} phi(x3) f(0, x3) dx3
    double relative_error = 0.0;
    double absolute_error = 0.0;
};

struct EdgeDemoReport {
    std::vector<EdgeDemoEntry> entries;
    double max_relative_error = 0.0;
    double max_absolute_error = 0.0;
};

/// For each xi, reduces a polynomial source to the chart plane and recovers
/// R_xi f(0) with moment_extract, component by component.
inline EdgeDemoReport edge_vanishing_demo(const PolyVec<3>& f, const std::vector<double>& xis,
                                          const CornerChart& chart, const DimensionReductionSpec& base,
                                          const std::vector<double>& s_grid = default_s_grid()) {
    if (xis.empty()) throw DomainError("edge_vanishing_demo: empty xi list");
    EdgeDemoReport rep;
    for (double xi : xis) {
        const DimensionReductionSpec spec = base.with_xi(xi);
        EdgeDemoEntry e;
        e.xi = xi;
        for (int k = 0; k < 3; ++k) {
            const Polynomial<2> g = reduce_polynomial(f[k], spec);
            e.reconstructed(k) = moment_extract(PolyVec<2>{g, Polynomial<2>()}, chart, s_grid).estimate;
            e.direct(k) = dimension_reduce([&](const Vec2&, double t) { return f[k](Vec3(0.0, 0.0, t)); },
                                           Vec2::Zero(), spec);
        }
        e.absolute_error = (e.reconstructed - e.direct).norm();
        e.relative_error = e.direct.norm() > 0.0 ? e.absolute_error / e.direct.norm() : e.absolute_error;
        rep.max_relative_error = std::max(rep.max_relative_error, e.relative_error);
        rep.max_absolute_error = std::max(rep.max_absolute_error, e.absolute_error);
        rep.entries.push_back(e);
    }
    return rep;
}

}  // namespace elasticorner
