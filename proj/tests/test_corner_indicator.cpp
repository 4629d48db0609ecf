#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <elasticorner/corner_indicator.hpp>

using namespace elasticorner;

namespace {

using P2 = Polynomial<2>;

P2 x() { return P2::coordinate(0); }
P2 y() { return P2::coordinate(1); }
P2 c(cplx v) { return P2::constant(v); }

const LameParameters kMat(1.5, 0.7);

ConvexPolygon unit_square() { return ConvexPolygon({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)}); }

PolyVec<2> random_core(std::mt19937& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    auto rc = [&] { return cplx(d(rng), d(rng)); };
    return {c(rc()) + x() * rc() + y() * y() * rc(), c(rc()) + x() * y() * rc()};
}

std::vector<double> decay_grid() {
    std::vector<double> s;
    for (int i = 0; i < 15; ++i) s.push_back(5.0 + 35.0 * i / 14.0);
    return s;
}

}  // namespace

TEST(Manufactured, VanishesOnEdgesAndAtVertexOrder) {
    const auto chart = synthetic_chart(std::numbers::pi / 2, 1.0);
    const auto f = build_manufactured(chart, {c(1.0), P2()}, kMat);
    const auto [umax, tmax] = f.edge_residuals(kMat);
    EXPECT_LE(umax, 1e-14);
    EXPECT_LE(tmax, 1e-10);
    EXPECT_EQ(navier_apply<2>(f.jet_field(), kMat, Vec2(0.0, 0.0)).norm(), 0.0);
    EXPECT_LT(navier_apply<2>(f.jet_field(), kMat, Vec2(1e-3, 0.0)).norm(), 1e-5);
    EXPECT_GT(f(Vec2(0.3, 0.1)).norm(), 0.0);
    EXPECT_EQ(f(Vec2(1.1, 0.0)).norm(), 0.0);
}

TEST(Manufactured, ZeroCoreIsZero) {
    const auto f = build_manufactured(synthetic_chart(1.0, 0.5), {P2(), P2()}, kMat);
    EXPECT_EQ(f(Vec2(0.2, 0.05)).norm(), 0.0);
}

TEST(Manufactured, JetsMatchFiniteDifferencesAcrossTheEnvelope) {
    const auto f = build_manufactured(synthetic_chart(2.0, 1.0), {c(1.0) + x(), y() * cplx(0, 1)}, kMat);
    const std::function<CVec<2>(const Vec2&)> pf = [&](const Vec2& p) { return f(p); };
    for (const Vec2& p : {Vec2(0.3, 0.1), Vec2(0.7, -0.2), Vec2(0.55, 0.3)}) {
        const CVec<2> a = navier_apply<2>(f.jet_field(), kMat, p);
        const CVec<2> b = navier_apply_fd<2>(pf, kMat, p, 1e-4);
        EXPECT_LT((a - b).norm(), 1e-5 * (1 + a.norm())) << p.transpose();
    }
}

TEST(CornerIdentity, HoldsForRandomChartsCoresAndSharpness) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> open(0.3 * std::numbers::pi, 0.9 * std::numbers::pi), rad(0.4, 1.5);
    for (int k = 0; k < 3; ++k) {
        const auto chart = synthetic_chart(open(rng), rad(rng));
        for (int j = 0; j < 3; ++j) {
            const auto f = build_manufactured(chart, random_core(rng), kMat);
            for (double s : {2.0, 5.0, 10.0})
                for (auto conv : {OperatorConvention::Paper, OperatorConvention::Standard}) {
                    const auto r = corner_identity_check(f, ExponentialProbe(s), kMat, {}, conv);
                    EXPECT_LE(r.rel_error, 1e-6) << "chart " << k << " core " << j << " s " << s;
                }
        }
    }
}

TEST(CornerIdentity, WrongConormalBreaksTheIdentity) {
    // the traction alone is not the conormal of the paper operator when lambda != mu
    const auto f = build_manufactured(synthetic_chart(std::numbers::pi / 2, 1.0), {c(1.0), c(cplx(0, 1)) + x()}, kMat);
    const auto paper = corner_identity_check(f, ExponentialProbe(3.0), kMat, {}, OperatorConvention::Paper);
    const ExponentialProbe p(3.0);
    const cplx rhs_traction = [&] {
        cplx acc = 0.0;
        const JetField<2> u = f.jet_field(), v = probe_jet_field(p);
        for (const auto& [th, w] : gauss_on(-std::numbers::pi / 4, std::numbers::pi / 4, 64)) {
            const Vec2 dir(std::cos(th), std::sin(th));
            const Vec2 q = paper.radius * dir;
            acc += w * paper.radius *
                   ((boundary_traction<2>(u, kMat, q, dir).transpose() * probe_eval(q, p))(0) -
                    (boundary_traction<2>(v, kMat, q, dir).transpose() * f(q))(0));
        }
        return acc;
    }();
    EXPECT_LE(paper.rel_error, 1e-10);
    EXPECT_GT(std::abs(rhs_traction - paper.lhs), 1e-3 * std::abs(paper.lhs));
}

TEST(CornerIdentity, InnerCircleVanishes) {
    const auto f = build_manufactured(synthetic_chart(std::numbers::pi / 2, 1.0), {c(1.0), x()}, kMat);
    const auto r = corner_identity_check(f, ExponentialProbe(3.0), kMat, {1e-1, 1e-2, 1e-3, 1e-4});
    EXPECT_TRUE(r.inner_decreasing);
    EXPECT_LT(std::abs(r.inner_circle.back()), 1e-12 * std::abs(r.lhs) + 1e-14);
    for (double e : r.punctured_error) EXPECT_LE(e, 1e-10);
}

TEST(CornerIdentity, ZeroFieldGivesZeroSides) {
    const auto f = build_manufactured(synthetic_chart(1.2, 0.8), {P2(), P2()}, kMat);
    const auto r = corner_identity_check(f, ExponentialProbe(4.0), kMat, {0.1});
    EXPECT_EQ(r.lhs, cplx(0.0));
    EXPECT_EQ(r.rhs, cplx(0.0));
}

TEST(CornerIdentity, RejectsBadEpsGrid) {
    const auto f = build_manufactured(synthetic_chart(1.2, 0.8), {c(1.0), P2()}, kMat);
    EXPECT_THROW(corner_identity_check(f, ExponentialProbe(4.0), kMat, {0.01, 0.1}), DomainError);
    EXPECT_THROW(corner_identity_check(f, ExponentialProbe(4.0), kMat, {2.0}), DomainError);
}

TEST(MomentExtract, ConstantDensityRecovered) {
    for (const auto& chart : {corner_chart(unit_square(), 0), synthetic_chart(1.1, 0.7), synthetic_chart(2.6, 1.0)}) {
        const auto r = moment_extract(PolyVec<2>{c(0.7), c(-0.4)}, chart);
        EXPECT_LT(std::abs(r.estimate - cplx(0.7, -0.4)), 0.01 * std::abs(cplx(0.7, -0.4)));
    }
}

TEST(MomentExtract, TruncationWithinTailBound) {
    const auto chart = corner_chart(unit_square(), 2);
    const auto r = moment_extract(PolyVec<2>{c(1.0), P2()}, chart);
    for (std::size_t i = 0; i < r.s_grid.size(); ++i) {
        const double s = r.s_grid[i];
        const double trunc = std::abs(r.scaled_moments[i] - r.corner_constant);
        EXPECT_LE(trunc, 2.0 * std::pow(s, 4) * sector_tail_exact(chart.sector, s, chart.h) + 1e-9) << s;
    }
}

TEST(MomentExtract, VanishingDensityScalesLikeInverseSquare) {
    const auto chart = synthetic_chart(std::numbers::pi / 2, 1.0);
    const auto r = moment_extract(PolyVec<2>{x(), y() * cplx(0, 1)}, chart);
    EXPECT_NEAR(r.decay_slope, -2.0, 0.3);
    EXPECT_LT(std::abs(r.estimate), 0.02);
}

TEST(MomentExtract, ZeroDensityAndDegenerateCone) {
    const auto chart = synthetic_chart(1.0, 1.0);
    EXPECT_EQ(moment_extract(PolyVec<2>{P2(), P2()}, chart).estimate, cplx(0.0));
    CornerChart flat = chart;
    flat.sector = Sector::symmetric(std::numbers::pi);
    EXPECT_EQ(sector_moment_constant(flat.sector), cplx(0.0));
    EXPECT_THROW(moment_extract(PolyVec<2>{c(1.0), P2()}, flat), DegenerateConeError);
    EXPECT_THROW(moment_extract(PolyVec<2>{c(1.0), P2()}, chart, {8.0, 4.0, 16.0}), DomainError);
}

TEST(MomentExtract, ScalarDensityReturnsItsCornerValue) {
    const auto chart = synthetic_chart(1.3, 0.9);
    const auto r = moment_extract(std::function<cplx(const Vec2&)>([](const Vec2& p) { return cplx(2.0, 1.0) + p.x(); }),
                                  chart);
    EXPECT_LT(std::abs(r.estimate - cplx(2.0, 1.0)), 0.02 * std::abs(cplx(2.0, 1.0)));
}

TEST(BoundaryDecay, RateMatchesTheoryAndScalesWithRadius) {
    const auto chart = synthetic_chart(std::numbers::pi / 2, 1.0);
    const auto f = build_manufactured(chart, {c(1.0) + x() * cplx(0, 1), c(cplx(0.3, -0.2)) + y()}, kMat);
    const auto a = boundary_functional_decay(cauchy_data(f, kMat, 0.25), decay_grid(), kMat);
    const auto b = boundary_functional_decay(cauchy_data(f, kMat, 0.5), decay_grid(), kMat);
    EXPECT_NEAR(a.fitted_rate / a.theory_rate, 1.0, 0.15);
    EXPECT_NEAR(b.fitted_rate / b.theory_rate, 1.0, 0.15);
    EXPECT_LE(a.fitted_rate, 0.9 * a.theory_rate);
    EXPECT_LE(b.fitted_rate, 0.9 * b.theory_rate);
    EXPECT_NEAR(b.fitted_rate / a.fitted_rate, std::sqrt(2.0), 0.1 * std::sqrt(2.0));
}

TEST(BoundaryDecay, ZeroDataAndOffCentreArc) {
    const auto chart = synthetic_chart(std::numbers::pi / 2, 1.0);
    const auto f = build_manufactured(chart, {P2(), P2()}, kMat);
    auto d = cauchy_data(f, kMat, 0.5);
    const auto r = boundary_functional_decay(d, decay_grid(), kMat);
    EXPECT_TRUE(r.zero_data);
    for (const cplx& v : r.values) EXPECT_EQ(v, cplx(0.0));
    d.center = Vec2(0.1, 0.0);
    EXPECT_THROW(boundary_functional_decay(d, decay_grid(), kMat), GeometryError);
}

TEST(Witness, NonradiatingBumpGivesVanishingSweep) {
    const LameParameters m(2.0, 1.0);
    const double omega = 1.0;
    const auto chart = synthetic_chart(std::numbers::pi / 2, 1.0);
    const Vec2 c0(0.55, 0.0);
    const double a = 0.25;
    const P2 dx = x() - c(c0.x()), dy = y() - c(c0.y());
    const P2 b = (c(a * a) - dx * dx - dy * dy).pow(4);
    const PolyVec<2> w{b * (c(1.0) + dy), b * c(cplx(0, 1))};
    const SourceScene scene(DiskSupport{c0, a}, navier_polynomial<2>(w, m, omega), m, omega);
    WitnessOptions opt;
    opt.angular_nodes = 12;
    opt.radial_levels = 5;
    opt.radial_order = 8;
    const auto sweep = witness(scene, chart, default_s_grid(), 1.0, opt);
    double fmax = 0.0;
    for (int i = 0; i < 400; ++i) {
        const Vec2 p = c0 + a * std::sqrt(i / 400.0) * Vec2(std::cos(2.4 * i), std::sin(2.4 * i));
        fmax = std::max(fmax, scene.source(p).norm());
    }
    EXPECT_LE(std::abs(sweep.values.back()), 1e-4 * fmax * std::numbers::pi * a * a);
    EXPECT_EQ(sweep.corner_value, cplx(0.0));
}

TEST(Witness, ZeroSceneAndBadVertex) {
    const SourceScene scene(unit_square(), {P2(), P2()}, kMat, 1.0);
    const auto sweep = witness(scene, 0);
    for (const cplx& v : sweep.values) EXPECT_EQ(v, cplx(0.0));
    EXPECT_THROW(witness(scene, 4), DomainError);
}

TEST(Witness, ConstantSquareSourceChannelGivesCornerConstant) {
    const SourceScene scene(unit_square(), {c(1.0), P2()}, LameParameters(2.0, 1.0), 1.0);
    WitnessOptions opt;
    opt.angular_nodes = 10;
    opt.radial_levels = 4;
    opt.radial_order = 8;
    const auto sweep = witness(scene, 0, default_s_grid(), opt);
    const cplx expected = sweep.corner_constant * sweep.corner_value;
    EXPECT_LT(std::abs(sweep.source_limit - expected), 0.02 * std::abs(expected));
    EXPECT_GT(std::abs(sweep.field_limit), 1e-2 * std::abs(expected));
    EXPECT_GT(sweep.discrepancy, 1e-2 * std::abs(expected));
}

TEST(MomentExtract, SceneVertexUsesChartComponents) {
    const ConvexPolygon sq({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)});
    const SourceScene s(sq, {Polynomial<2>::constant(1.0), Polynomial<2>()}, kMat, 1.0);
    for (int v = 0; v < 4; ++v) {
        const auto r = moment_extract(s, v);
        const CVec<2> local = detail::to_local_components(corner_chart(sq, v), CVec<2>(1.0, 0.0));
        EXPECT_LT(std::abs(r.estimate - (local(0) + cplx(0.0, 1.0) * local(1))), 0.02);
        EXPECT_LT(std::abs(r.global_estimate() - 1.0), 0.02);
    }
    EXPECT_THROW(moment_extract(s, 4), DomainError);
}
