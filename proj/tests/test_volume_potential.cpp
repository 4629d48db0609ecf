#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <elasticorner/special_functions.hpp>
#include <elasticorner/volume_potential.hpp>

using namespace elasticorner;

namespace {

using P2 = Polynomial<2>;

const LameParameters kMat(2.0, 1.0);
constexpr double kOmega = 2.0;

P2 x() { return P2::coordinate(0); }
P2 y() { return P2::coordinate(1); }
P2 c(cplx v) { return P2::constant(v); }

ConvexPolygon triangle() { return ConvexPolygon({Vec2(0, 0), Vec2(1, 0), Vec2(0.3, 0.8)}); }

// w = (l1 l2 l3)^2 q vanishes to second order on the boundary, so the
// radiated field of f = (mu Delta + (lambda + mu) grad div + omega^2) w is w itself.
PolyVec<2> triangle_bubble() {
    const P2 l1 = y();
    const P2 l2 = c(0.8) - x() * cplx(0.8) - y() * cplx(0.7);  // through (1,0), (0.3,0.8)
    const P2 l3 = x() * cplx(0.8) - y() * cplx(0.3);            // through (0,0), (0.3,0.8)
    const P2 b = (l1 * l2 * l3).pow(2);
    return {b * (c(1.0) + x() * cplx(0.0, 2.0)), b * (c(cplx(0.5, -1.0)) + y())};
}

PolyVec<2> disk_bubble(const Vec2& center, double a) {
    const P2 dx = x() - c(center.x()), dy = y() - c(center.y());
    const P2 b = (c(a * a) - dx * dx - dy * dy).pow(4);
    return {b * (c(1.0) + dy), b * (c(cplx(0.0, 1.0)) - dx * cplx(2.0))};
}

SourceScene square_scene(PolyVec<2> f) {
    return SourceScene(ConvexPolygon({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)}), std::move(f), kMat, kOmega);
}

PolyVec<2> constant_density() { return {c(1.0), c(cplx(0.0, 0.5))}; }

// mu Delta u + (lambda + mu) grad div u + omega^2 u by the 9-point stencil.
CVec<2> navier_fd(const VolumePotential& vp, const Vec2& p, double h) {
    const Vec2 e1(h, 0), e2(0, h);
    const CVec<2> u0 = vp(p);
    const CVec<2> d11 = (vp(p + e1) - 2.0 * u0 + vp(p - e1)) / (h * h);
    const CVec<2> d22 = (vp(p + e2) - 2.0 * u0 + vp(p - e2)) / (h * h);
    const CVec<2> d12 = (vp(p + e1 + e2) - vp(p + e1 - e2) - vp(p - e1 + e2) + vp(p - e1 - e2)) / (4 * h * h);
    const CVec<2> gd(d11(0) + d12(1), d12(0) + d22(1));
    const auto& m = vp.scene().material();
    const double w = vp.scene().freq().omega;
    return m.mu() * (d11 + d22) + (m.lambda() + m.mu()) * gd + w * w * u0;
}

}  // namespace

TEST(VolumePotential, ZeroDensityGivesZeroField) {
    const auto s = square_scene({P2(), P2()});
    EXPECT_EQ(volume_potential(s, Vec2(0.5, 0.5)).norm(), 0.0);
    EXPECT_EQ(volume_potential(s, Vec2(3.0, 0.5)).norm(), 0.0);
}

TEST(VolumePotential, LinearInDensity) {
    const PolyVec<2> f1 = constant_density();
    const PolyVec<2> f2 = {x() * y(), c(1.0) - x()};
    const PolyVec<2> sum = {f1[0] * cplx(2.0) + f2[0] * cplx(0.0, 1.0), f1[1] * cplx(2.0) + f2[1] * cplx(0.0, 1.0)};
    for (const Vec2& p : {Vec2(0.3, 0.6), Vec2(1.5, 0.2), Vec2(4.0, 3.0)}) {
        const CVec<2> a = volume_potential(square_scene(f1), p), b = volume_potential(square_scene(f2), p);
        const CVec<2> s = volume_potential(square_scene(sum), p);
        EXPECT_LT((s - 2.0 * a - cplx(0, 1) * b).norm(), 1e-12 * s.norm());
    }
}

TEST(VolumePotential, ReproducesTriangleBubbleInsideAndOutside) {
    const PolyVec<2> w = triangle_bubble();
    const SourceScene s(triangle(), navier_polynomial<2>(w, kMat, kOmega), kMat, kOmega);
    const VolumePotential vp(s);
    double scale = 0.0;
    for (const Vec2& p : {Vec2(0.4, 0.3), Vec2(0.35, 0.5), Vec2(0.7, 0.1)}) scale = std::max(scale, evaluate(w, p).norm());
    for (const Vec2& p : {Vec2(0.4, 0.3), Vec2(0.35, 0.5), Vec2(0.7, 0.1), Vec2(0.5, 0.001)}) {
        EXPECT_LT((vp(p) - evaluate(w, p)).norm(), 1e-9 * scale) << p.transpose();
    }
    for (const Vec2& p : {Vec2(0.5, -0.001), Vec2(1.2, 0.5), Vec2(-0.5, 1.0), Vec2(3.0, 2.0)}) {
        EXPECT_LT(vp(p).norm(), 1e-9 * scale) << p.transpose();
    }
}

TEST(VolumePotential, ReproducesDiskBubbleInsideAndOutside) {
    const Vec2 c0(0.2, -0.1);
    const double a = 0.7;
    const PolyVec<2> w = disk_bubble(c0, a);
    const SourceScene s(DiskSupport{c0, a}, navier_polynomial<2>(w, kMat, kOmega), kMat, kOmega);
    const VolumePotential vp(s);
    const double scale = evaluate(w, c0).norm();
    for (const Vec2& p : {c0, Vec2(0.5, 0.2), Vec2(-0.3, -0.4), Vec2(0.85, -0.1)})
        EXPECT_LT((vp(p) - evaluate(w, p)).norm(), 1e-9 * scale) << p.transpose();
    for (const Vec2& p : {Vec2(0.95, -0.1), Vec2(2.0, 1.0), Vec2(-3.0, 0.0)})
        EXPECT_LT(vp(p).norm(), 1e-9 * scale) << p.transpose();
}

TEST(VolumePotential, ConstantDiskCentreClosedForm) {
    // int_{B_a} G = I [ (1/2mu) int Phi_s + (1/(2(lambda+2mu))) int Phi_p ],
    // int_{B_a} Phi_k = i pi a H1(ka) / (2k) - 1/k^2.
    const double a = 0.6;
    const SourceScene s(DiskSupport{Vec2::Zero(), a}, {c(1.0), P2()}, kMat, kOmega);
    auto disk_int = [a](double k) {
        return cplx(0, 1) * std::numbers::pi * a * special::hankel1_one(k * a) / (2 * k) - 1.0 / (k * k);
    };
    const auto& k = s.freq();
    const cplx g = disk_int(k.omega_s) / (2 * kMat.mu()) + disk_int(k.omega_p) / (2 * (kMat.lambda() + 2 * kMat.mu()));
    const CVec<2> u = volume_potential(s, Vec2::Zero());
    EXPECT_LT(std::abs(u(0) + g), 1e-11 * std::abs(g));
    EXPECT_LT(std::abs(u(1)), 1e-11 * std::abs(g));
}

TEST(VolumePotential, FanAndRegularAgreeAwayFromSupport) {
    const auto s = square_scene({x() * x() + c(1.0), y() * cplx(0, 1)});
    VolumePotentialOptions fan, reg;
    fan.method = VolumePotentialMethod::Fan;
    reg.method = VolumePotentialMethod::Regular;
    const VolumePotential a(s, fan), b(s, reg);
    for (const Vec2& p : {Vec2(2.0, 0.5), Vec2(-1.0, -1.0), Vec2(6.0, 4.0)})
        EXPECT_LT((a(p) - b(p)).norm(), 1e-10 * a(p).norm()) << p.transpose();
}

TEST(VolumePotential, SatisfiesNavierEquationByFiniteDifferences) {
    const auto s = square_scene({x() * x() + c(1.0), y() * cplx(0, 1) + c(0.5)});
    const VolumePotential vp(s);
    for (const Vec2& p : {Vec2(0.4, 0.55), Vec2(0.8, 0.3)}) {
        const CVec<2> f = s.source(p);
        EXPECT_LT((navier_fd(vp, p, 1e-3) - f).norm(), 1e-3 * f.norm()) << p.transpose();
    }
    const double ref = s.source(Vec2(0.5, 0.5)).norm();
    for (const Vec2& p : {Vec2(1.4, 0.5), Vec2(-0.6, 1.7)})
        EXPECT_LT(navier_fd(vp, p, 1e-3).norm(), 1e-3 * ref) << p.transpose();
}

TEST(VolumePotential, PlanarOnly) {
    const SourceScene s(BallSupport{1.0}, PolyVec<3>{Polynomial<3>::constant(1.0), {}, {}}, LameParameters(2, 1, 3), 1.0);
    EXPECT_THROW(VolumePotential{s}, CapabilityError);
}

TEST(HelmholtzSplit, PartsAddUpAndAreIrrotationalOrSolenoidal) {
    const auto s = square_scene(constant_density());
    const VolumePotential vp(s);
    const double h = 0.04, H = 2 * h;
    const Vec2 p(2.5, 1.2);
    const auto sp = helmholtz_split(vp, p, h);
    EXPECT_LT((sp.u_p + sp.u_s - sp.u).norm(), 1e-3 * sp.u.norm());

    // outer differences with a different step
    const auto px = helmholtz_split(vp, p + Vec2(H, 0), h), mx = helmholtz_split(vp, p - Vec2(H, 0), h);
    const auto py = helmholtz_split(vp, p + Vec2(0, H), h), my = helmholtz_split(vp, p - Vec2(0, H), h);
    const cplx curl_p = (px.u_p(1) - mx.u_p(1) - py.u_p(0) + my.u_p(0)) / (2 * H);
    const cplx div_s = (px.u_s(0) - mx.u_s(0) + py.u_s(1) - my.u_s(1)) / (2 * H);
    const cplx div_p = (px.u_p(0) - mx.u_p(0) + py.u_p(1) - my.u_p(1)) / (2 * H);
    const cplx curl_s = (px.u_s(1) - mx.u_s(1) - py.u_s(0) + my.u_s(0)) / (2 * H);
    EXPECT_LT(std::abs(curl_p), 2e-2 * std::abs(div_p));
    EXPECT_LT(std::abs(div_s), 2e-2 * std::abs(curl_s));
}

TEST(HelmholtzSplit, RejectsTargetsNearSupport) {
    const auto s = square_scene(constant_density());
    EXPECT_THROW(helmholtz_split(s, Vec2(1.05, 0.5), 0.02), AccuracyError);
    EXPECT_THROW(helmholtz_split(s, Vec2(3.0, 0.5), 0.0), DomainError);
}

TEST(FarField, ProjectionsAndLinearity) {
    const auto s = square_scene(constant_density());
    const auto pat = far_field_pattern(s, 16);
    ASSERT_EQ(pat.directions.size(), 16u);
    for (std::size_t j = 0; j < pat.directions.size(); ++j) {
        const Eigen::VectorXd& e = pat.directions[j];
        EXPECT_LT(std::abs(e.cast<cplx>().dot(pat.us_inf[j])), 1e-14 * (1 + pat.us_inf[j].norm()));
        const CVecX perp = pat.up_inf[j] - e.cast<cplx>().dot(pat.up_inf[j]) * e.cast<cplx>();
        EXPECT_LT(perp.norm(), 1e-14 * (1 + pat.up_inf[j].norm()));
    }
    const auto s2 = square_scene({c(3.0), c(cplx(0.0, 1.5))});
    const auto f1 = far_field(s, pat.directions[3]), f3 = far_field(s2, pat.directions[3]);
    EXPECT_LT((f3.us_inf - 3.0 * f1.us_inf).norm(), 1e-13 * f3.us_inf.norm());
    EXPECT_THROW(far_field(s, Eigen::Vector2d(1.0, 1.0)), DomainError);
    EXPECT_EQ(far_field_pattern(square_scene({P2(), P2()}), 8).max_magnitude(), 0.0);
}

TEST(FarField, ConstantSquareClosedForm) {
    // int_[0,1]^2 e^{-ik e.y} dy = prod_j (1 - e^{-i k e_j}) / (i k e_j)
    const auto s = square_scene({c(1.0), P2()});
    const Eigen::Vector2d e(std::cos(0.7), std::sin(0.7));
    auto ft = [&](double k) {
        cplx v = 1.0;
        for (int j = 0; j < 2; ++j) v *= (1.0 - std::exp(cplx(0, -k * e(j)))) / cplx(0, k * e(j));
        return v;
    };
    const auto f = far_field(s, e);
    const auto& k = s.freq();
    EXPECT_LT(std::abs(f.up_inf(0) - ft(k.omega_p) * e(0) * e(0)), 1e-13);
    EXPECT_LT(std::abs(f.us_inf(1) + ft(k.omega_s) * e(0) * e(1)), 1e-13);
}

TEST(FarField, BallClosedFormMatchesQuadrature) {
    const LameParameters m3(1.0, 0.5, 3);
    const Vec3 e = Vec3(1, 2, 2) / 3.0;
    for (double k : {0.5, 3.0, 7.0})
        EXPECT_NEAR(std::abs(ball_char_ft(k, 0.8) - ball_ft_quadrature(k, e, Polynomial<3>::constant(1.0), 0.8)), 0.0, 1e-12);
    EXPECT_NEAR(ball_char_ft(1e-3), 4.0 * std::numbers::pi / 3.0, 1e-6);
    const SourceScene s(BallSupport{1.0}, PolyVec<3>{Polynomial<3>::constant(1.0), Polynomial<3>::coordinate(2), {}}, m3, 1.3);
    const auto pat = far_field_pattern(s, 10);
    for (std::size_t j = 0; j < 10; ++j) EXPECT_NEAR(pat.directions[j].norm(), 1.0, 1e-14);
}

TEST(FarField, AsymptoticResidualDecaysOneOrderFaster) {
    const auto s = square_scene({x() + c(1.0), y() * cplx(0, 1)});
    const Vec2 e(std::cos(0.4), std::sin(0.4));
    std::vector<double> radii;
    for (int i = 0; i < 8; ++i) radii.push_back(15.0 * std::pow(1.25, i));
    const auto rep = far_field_asymptotic_check(s, e, radii);
    EXPECT_NEAR(rep.residual_slope, -1.5, 0.1);
    EXPECT_NEAR(rep.leading_slope, -0.5, 0.05);
    EXPECT_LT(std::abs(rep.fitted_kappa_s - rep.kappa_s), 0.05 * std::abs(rep.kappa_s));
    EXPECT_LT(std::abs(rep.fitted_kappa_p - rep.kappa_p), 0.05 * std::abs(rep.kappa_p));
    EXPECT_GT(rep.printed_prefactor_slope, -1.0);
    EXPECT_THROW(far_field_asymptotic_check(s, e, {1.0, 2.0, 3.0, 4.0}), AccuracyError);
}
