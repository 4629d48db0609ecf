// Acceptance run: one PASS/FAIL line per criterion.
// Exit code is nonzero when a criterion fails, unless it is listed as a known defect.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <elasticorner/elasticorner.hpp>

using namespace elasticorner;
using P2 = Polynomial<2>;
using P3 = Polynomial<3>;
constexpr double pi = std::numbers::pi;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double time_limit;  // seconds
    bool known_defect;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

void require(Outcome& o, bool ok, const std::string& what) {
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += what + (ok ? "" : " [x]");
    o.pass = o.pass && ok;
}

std::vector<Sector> five_sectors() {
    return {Sector(0, pi / 2), Sector(-pi / 4, pi / 4), Sector(-pi / 6, pi / 3), Sector(-1.0, 0.5), Sector(0.2, 1.6)};
}

Outcome sector_moments() {
    double worst = 0.0;
    for (const Sector& K : five_sectors())
        for (double s : {1.0, 2.0, 4.0, 8.0}) {
            const cplx exact = sector_moment_exact(K, s);
            worst = std::max(worst, std::abs(sector_moment_quadrature(K, s).value - exact) / std::abs(exact));
        }
    Outcome o;
    require(o, worst <= 1e-6, fmt("max rel err %.3e (tol 1e-6)", worst));
    return o;
}

Outcome probe_null() {
    const ExponentialProbe p(3.0);
    const std::function<CVec<2>(const Vec2&)> v = [p](const Vec2& x) { return probe_eval(x, p); };
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> R(0.2, 1.5), T(-0.8 * pi, 0.8 * pi);
    double worst = 1e300;
    for (const LameParameters& mat : {LameParameters(1.0, 1.0), LameParameters(2.5, 0.6)})
        for (int k = 0; k < 20; ++k) {
            const double rho = R(rng), th = T(rng);
            const Vec2 x = rho * Vec2(std::cos(th), std::sin(th));
            const double a = navier_apply_fd<2>(v, mat, x, 1e-2).norm();
            const double b = navier_apply_fd<2>(v, mat, x, 5e-3).norm();
            worst = std::min(worst, std::log2(a / b));
        }
    Outcome o;
    require(o, worst >= 1.9, fmt("min observed order %.3f (need >= 1.9)", worst));
    return o;
}

Outcome corner_identity() {
    const LameParameters mat(1.5, 0.7);
    const P2 x = P2::coordinate(0), y = P2::coordinate(1), one = P2::constant(1.0);
    const std::vector<CornerChart> charts{synthetic_chart(0.35 * pi, 0.6), synthetic_chart(0.5 * pi, 1.0),
                                          synthetic_chart(0.85 * pi, 1.4)};
    const std::vector<PolyVec<2>> cores{
        {one, P2()},
        {one + x * cplx(0, 1), y * y},
        {x * y + P2::constant(cplx(0.2, -0.4)), one * cplx(0.5) + x * x * cplx(0, -1)},
    };
    const double svals[] = {2.0, 5.0, 10.0};
    double worst = 0.0, last_inner = 0.0;
    int increasing = 0, n = 0;
    for (const CornerChart& ch : charts)
        for (std::size_t j = 0; j < cores.size(); ++j) {
            const auto f = build_manufactured(ch, cores[j], mat);
            std::vector<double> eps;
            for (double e : {1e-1, 1e-2, 1e-3, 1e-4}) eps.push_back(e * ch.h);
            const auto r = corner_identity_check(f, ExponentialProbe(svals[j]), mat, eps);
            worst = std::max(worst, r.rel_error);
            if (!r.inner_decreasing) ++increasing;
            last_inner = std::max(last_inner, std::abs(r.inner_circle.back()) / std::max(std::abs(r.lhs), 1e-300));
            ++n;
        }
    Outcome o;
    require(o, n == 9, "cases " + std::to_string(n));
    require(o, worst <= 1e-6, fmt("max rel err %.3e (tol 1e-6)", worst));
    require(o, increasing == 0, "non-decreasing inner sequences " + std::to_string(increasing));
    require(o, last_inner <= 1e-3, fmt("inner/|LHS| at 1e-4 h %.2e", last_inner));
    return o;
}

Outcome corner_extraction() {
    const ConvexPolygon sq({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)});
    const auto c = moment_extract(PolyVec<2>{P2::constant(1.0), P2()}, corner_chart(sq, 0));
    const double err = std::abs(c.global_estimate() - 1.0);
    const auto v = moment_extract(PolyVec<2>{P2::coordinate(0), P2::coordinate(1) * cplx(0, 1)},
                                  synthetic_chart(pi / 2, 1.0));
    Outcome o;
    require(o, err <= 0.02, fmt("constant density |est - 1| %.3e (tol 0.02)", err));
    require(o, std::abs(v.decay_slope + 2.0) <= 0.3, fmt("vanishing slope %.3f (target -2 +- 0.3)", v.decay_slope));
    return o;
}

Outcome boundary_decay() {
    const LameParameters mat(1.5, 0.7);
    const auto chart = synthetic_chart(pi / 2, 1.0);
    const auto f = build_manufactured(
        chart, {P2::constant(1.0) + P2::coordinate(0) * cplx(0, 1), P2::constant(cplx(0.3, -0.2)) + P2::coordinate(1)}, mat);
    std::vector<double> s;
    for (int i = 0; i < 15; ++i) s.push_back(5.0 + 35.0 * i / 14.0);
    const auto d = boundary_functional_decay(cauchy_data(f, mat, 0.5), s, mat);
    const double rel = std::abs(d.fitted_rate / d.theory_rate - 1.0);
    Outcome o;
    require(o, rel <= 0.15, fmt("fitted rate %.4f", d.fitted_rate) + fmt(" vs %.4f", d.theory_rate) +
                                fmt(", rel %.3f (tol 0.15)", rel));
    return o;
}

Outcome upper_bounds() {
    const auto ks = five_sectors();
    double alpha_ratio = 0.0, tail_ratio = 0.0;
    for (int i = 0; i < 3; ++i)
        for (double s : {2.0, 8.0}) {
            for (double a : {0.25, 0.5, 1.0})
                alpha_ratio = std::max(alpha_ratio, sector_abs_moment(ks[i], s, a) / sector_alpha_bound(ks[i], s, a));
            tail_ratio = std::max(tail_ratio, sector_tail_exact(ks[i], s, 1.0) / sector_tail_bound(ks[i], s, 1.0));
        }
    Outcome o;
    require(o, alpha_ratio <= 1.0, fmt("alpha-moment value/bound max %.3f", alpha_ratio));
    require(o, tail_ratio <= 1.0, fmt("tail value/bound max %.3f", tail_ratio));
    return o;
}

Outcome dimension_reduction() {
    const LameParameters mat(1.2, 0.8, 3);
    DimensionReductionSpec base;
    base.center = 0.1;
    base.width = 0.8;
    const CornerChart chart = synthetic_chart(0.6 * pi, 0.8);
    const P3 x1 = P3::coordinate(0), x2 = P3::coordinate(1), x3 = P3::coordinate(2);
    const PrismField u(chart, {P3::constant(1.0) + x1 * x3, x2 * cplx(0, 1) + x3 * x3, P3::constant(0.5) + x1 * x2 * x3});
    const std::vector<double> xis{0.0, 1.0, 2.0, 4.0};
    double gamma = 0.0;
    for (double xi : xis)
        gamma = std::max(gamma, reduced_equation_check(u, mat, base.with_xi(xi), gamma_samples(chart)).gamma_residual);
    const auto demo = edge_vanishing_demo({P3::constant(1.0), P3::constant(cplx(0, 2)), P3::constant(-0.5)}, xis, chart, base);
    Outcome o;
    require(o, gamma <= 1e-3, fmt("max Gamma residual %.3e (tol 1e-3)", gamma));
    require(o, demo.max_relative_error <= 0.02, fmt("edge demo max rel err %.3e (tol 0.02)", demo.max_relative_error));
    return o;
}

Outcome nonradiating_source() {
    constexpr double vol = 4.0 * pi / 3.0;
    const auto tuned = verify_nonradiating(1.0, 1, 2, 64);
    const auto detuned = verify_nonradiating(BallScene{1.0, Vec3::UnitX(), 1.0, LameParameters(1.0, 1.0, 3)}, 64);
    const double margin = tuned.convexity_margin;
    Outcome o;
    require(o, tuned.max_farfield <= 1e-8 * vol, fmt("tuned max %.2e", tuned.max_farfield) + fmt(" (tol %.2e)", 1e-8 * vol));
    require(o, tuned.oracle_residual <= 1e-5, fmt("oracle residual %.2e (tol 1e-5)", tuned.oracle_residual));
    require(o, detuned.max_farfield >= 1e-2 * vol,
            fmt("detuned max %.3e", detuned.max_farfield) + fmt(" (need >= %.3e)", 1e-2 * vol));
    require(o, std::abs(margin - 0.0816) <= 1e-4, fmt("margin %.6f (0.0816 +- 1e-4)", margin));
    return o;
}

Outcome forward_physics() {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> U(-2, 2);
    double recip = 0.0;
    const LameParameters m2(0.8, 1.2, 2), m3(0.8, 1.2, 3);
    const Wavenumbers k2(2.0, m2), k3(2.0, m3);
    for (int n = 0; n < 100; ++n) {
        const Vec2 x(U(rng), U(rng)), y(U(rng), U(rng));
        const CMat<2> a = green_tensor<2>(x, y, m2, k2), b = green_tensor<2>(y, x, m2, k2);
        recip = std::max(recip, (a - b.transpose()).norm() / a.norm());
        const Vec3 X(U(rng), U(rng), U(rng)), Y(U(rng), U(rng), U(rng));
        const CMat<3> A = green_tensor<3>(X, Y, m3, k3), B = green_tensor<3>(Y, X, m3, k3);
        recip = std::max(recip, (A - B.transpose()).norm() / A.norm());
    }

    const LameParameters m(2.0, 1.0);
    const SourceScene s(ConvexPolygon({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)}),
                        {P2::constant(1.0), P2::constant(cplx(0.0, 0.5))}, m, 2.0);
    const VolumePotential vp(s);
    const double h = 0.04, H = 2 * h;
    const Vec2 p(2.5, 1.2);
    const auto sp = helmholtz_split(vp, p, h);
    const double sum_err = (sp.u_p + sp.u_s - sp.u).norm() / sp.u.norm();
    const auto px = helmholtz_split(vp, p + Vec2(H, 0), h), mx = helmholtz_split(vp, p - Vec2(H, 0), h);
    const auto py = helmholtz_split(vp, p + Vec2(0, H), h), my = helmholtz_split(vp, p - Vec2(0, H), h);
    const cplx curl_p = (px.u_p(1) - mx.u_p(1) - py.u_p(0) + my.u_p(0)) / (2 * H);
    const cplx div_s = (px.u_s(0) - mx.u_s(0) + py.u_s(1) - my.u_s(1)) / (2 * H);
    const cplx div_p = (px.u_p(0) - mx.u_p(0) + py.u_p(1) - my.u_p(1)) / (2 * H);
    const cplx curl_s = (px.u_s(1) - mx.u_s(1) - py.u_s(0) + my.u_s(0)) / (2 * H);
    const double rot_ratio = std::abs(curl_p) / std::abs(div_p), div_ratio = std::abs(div_s) / std::abs(curl_s);

    const SourceScene lin(ConvexPolygon({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)}),
                          {P2::coordinate(0) + P2::constant(1.0), P2::coordinate(1) * cplx(0, 1)}, m, 2.0);
    std::vector<double> radii;
    for (int i = 0; i < 8; ++i) radii.push_back(15.0 * std::pow(1.25, i));
    const auto ff = far_field_asymptotic_check(lin, Vec2(std::cos(0.4), std::sin(0.4)), radii);

    Outcome o;
    require(o, recip <= 1e-12, fmt("reciprocity %.2e (tol 1e-12)", recip));
    require(o, sum_err <= 1e-3, fmt("|u_p + u_s - u|/|u| %.2e (tol 1e-3)", sum_err));
    require(o, rot_ratio <= 2e-2, fmt("|rot u_p|/|div u_p| %.2e (tol 2e-2)", rot_ratio));
    require(o, div_ratio <= 2e-2, fmt("|div u_s|/|rot u_s| %.2e (tol 2e-2)", div_ratio));
    require(o, std::abs(ff.residual_slope + 1.5) <= 0.1, fmt("remainder slope %.3f (target -1.5 +- 0.1)", ff.residual_slope));
    return o;
}

Outcome degenerate_cone() {
    const cplx flat = sector_moment_constant(-pi / 2, pi / 2);
    const cplx shifted = sector_moment_constant(0.3, 0.3 + pi);
    double smallest = 1e300;
    for (double a : {0.1 * pi, 0.5 * pi, 0.9 * pi, 0.999 * pi, 1.001 * pi, 1.5 * pi})
        smallest = std::min(smallest, std::abs(sector_moment_constant(-a / 2, a / 2)));
    bool raised = false;
    std::string message;
    try {
        CornerChart chart = synthetic_chart(1.0, 1.0);
        chart.sector = Sector::symmetric(pi);
        moment_extract(PolyVec<2>{P2::constant(1.0), P2()}, chart);
    } catch (const DegenerateConeError& e) {
        raised = true;
        message = e.what();
    }
    Outcome o;
    require(o, flat == cplx(0.0) && shifted == cplx(0.0), "C_K at opening pi exactly 0");
    require(o, smallest > 0.0, fmt("min |C_K| away from pi %.2e", smallest));
    require(o, raised, raised ? "DegenerateConeError: " + message : "no error raised");
    return o;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "sector moment closed form", 5, false, sector_moments},
        {2, "probe is a Navier null solution", 5, false, probe_null},
        {3, "corner integration-by-parts identity", 60, false, corner_identity},
        {4, "corner-value extraction", 60, false, corner_extraction},
        {5, "boundary functional exponential decay", 30, false, boundary_decay},
        {6, "sector moment and tail upper bounds", 30, true, upper_bounds},
        {7, "dimension reduction and edge demo", 120, false, dimension_reduction},
        {8, "nonradiating ball source", 30, false, nonradiating_source},
        {9, "forward-model physics", 120, false, forward_physics},
        {10, "degenerate cone", 1, false, degenerate_cone},
    };
    int gating = 0, known = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.time_limit;
        const bool pass = o.pass && in_time;
        std::printf("%s  %2d  %-40s %7.2fs/%gs  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(), secs, c.time_limit,
                    o.detail.c_str(), (!pass && c.known_defect) ? "  (known defect)" : "");
        std::fflush(stdout);
        if (!pass) (c.known_defect ? known : gating) += 1;
    }
    std::printf("%d gating failure(s), %d known defect(s)\n", gating, known);
    return gating == 0 ? 0 : 1;
}
