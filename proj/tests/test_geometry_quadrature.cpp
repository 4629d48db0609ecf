#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "elasticorner/geometry.hpp"
#include "elasticorner/quadrature.hpp"

using namespace elasticorner;
using std::numbers::pi;

namespace {

ConvexPolygon unit_square() { return ConvexPolygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

ConvexPolygon equilateral() { return ConvexPolygon({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}); }

bool rule_positive(const Rule2& r) {
    for (double w : r.weights)
        if (!(w > 0.0)) return false;
    return true;
}

}  // namespace

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
    for (int n : {1, 2, 5, 16, 40}) {
        const auto& g = gauss_legendre(n);
        for (int d = 0; d <= 2 * n - 1; ++d) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += g.w[i] * std::pow(g.x[i], d);
            const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
            EXPECT_NEAR(acc, exact, 1e-13) << n << " " << d;
        }
    }
    EXPECT_THROW(gauss_legendre(0), DomainError);
}

TEST(Sector, DeltaAndValidation) {
    const Sector k(0.0, pi / 2);
    EXPECT_NEAR(k.delta(), std::cos(pi / 4), 1e-15);
    EXPECT_NEAR(Sector::symmetric(pi / 2).delta(), std::cos(pi / 8), 1e-15);
    EXPECT_THROW(Sector(1.0, 0.5), GeometryError);
    EXPECT_THROW(Sector(-pi, 0.5), GeometryError);
    EXPECT_THROW(Sector(0.0, pi), GeometryError);
}

TEST(ConvexPolygon, Validation) {
    EXPECT_THROW(ConvexPolygon({{0, 0}, {1, 0}}), GeometryError);
    EXPECT_THROW(ConvexPolygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), GeometryError);  // clockwise
    EXPECT_THROW(ConvexPolygon({{0, 0}, {1, 0}, {2, 0}, {1, 1}}), GeometryError);  // collinear
    EXPECT_THROW(ConvexPolygon({{0, 0}, {2, 0}, {1, 0.2}, {2, 2}, {0, 2}}), GeometryError);
    EXPECT_NEAR(unit_square().area(), 1.0, 1e-15);
}

TEST(CornerChart, UnitSquareAndTriangle) {
    for (int i = 0; i < 4; ++i) {
        const CornerChart c = corner_chart(unit_square(), i);
        EXPECT_NEAR(c.sector.theta_m(), -pi / 4, 1e-14);
        EXPECT_NEAR(c.sector.theta_M(), pi / 4, 1e-14);
        EXPECT_NEAR(c.h, 0.5, 1e-14);
    }
    const CornerChart t = corner_chart(equilateral(), 0);
    EXPECT_NEAR(t.sector.opening(), pi / 3, 1e-14);
    EXPECT_THROW(corner_chart(unit_square(), 4), DomainError);
}

TEST(CornerChart, ChartPropertyAndIsometry) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const ConvexPolygon poly({{0, 0}, {2, 0.3}, {2.4, 1.7}, {0.8, 2.2}, {-0.5, 1.0}});
    for (int v = 0; v < static_cast<int>(poly.size()); ++v) {
        const CornerChart c = corner_chart(poly, v);
        int checked = 0;
        while (checked < 200) {
            const Vec2 y(U(rng) * c.h, U(rng) * c.h);
            if (y.norm() >= c.h || y.norm() < 1e-9) continue;
            const double sd = poly.signed_distance(c.to_global(y));
            const double a = std::atan2(y.y(), y.x());
            if (std::abs(sd) < 1e-12 || std::abs(a - c.sector.theta_m()) < 1e-12 ||
                std::abs(a - c.sector.theta_M()) < 1e-12)
                continue;
            EXPECT_EQ(sd > 0.0, c.sector.contains(y));
            ++checked;
        }
        const Vec2 p(0.3, -0.7), q(1.1, 0.4);
        EXPECT_NEAR((c.to_local(p) - c.to_local(q)).norm(), (p - q).norm(), 1e-14);
        EXPECT_NEAR((c.to_global(c.to_local(p)) - p).norm(), 0.0, 1e-14);
    }
}

TEST(SectorBallRule, AreaPositivityAndRootMoments) {
    const CornerChart c = synthetic_chart(1.3, 0.8);
    const Rule2 r = sector_ball_rule(c);
    EXPECT_TRUE(rule_positive(r));
    EXPECT_NEAR(r.total_weight(), 1.3 * 0.64 / 2, 1e-12 * 0.4);
    // int rho^{1/2} cos(theta) over K cap B = (2 sin(0.65)) h^{5/2} / (5/2)
    const double exact = 2.0 * std::sin(0.65) * std::pow(0.8, 2.5) / 2.5;
    const double got = r.integrate([](const Vec2& x) { return std::sqrt(x.norm()) * x.x() / x.norm(); });
    EXPECT_NEAR(got, exact, 1e-9 * exact);
    EXPECT_THROW(sector_ball_rule(c, 0, 16), DomainError);
    EXPECT_THROW(sector_ball_rule(c, 10, 1), DomainError);
}

TEST(SectorBallRule, GradingConvergence) {
    // The innermost panel dominates: its error scales like (q^L)^{5/2}, so one
    // stage of two levels gains 2^5 and a pair of stages at least 2^8.
    const Sector k = Sector::symmetric(pi / 2);
    const double exact = (pi / 2) / 2.5;
    auto err = [&](int levels) {
        PolarRuleOptions o;
        o.levels = levels;
        return std::abs(sector_ball_rule(k, 1.0, o).integrate([](const Vec2& x) { return std::sqrt(x.norm()); }) -
                        exact);
    };
    EXPECT_LE(err(8), err(4) / 256.0);
    EXPECT_LE(err(12), err(8) / 256.0);
    EXPECT_LE(err(40), 1e-12);
}

TEST(SingularDiskRule, LogAndInverseKernels) {
    const Rule2 r = singular_disk_rule(Vec2(0.3, -0.2), 1.0, 12);
    EXPECT_TRUE(rule_positive(r));
    EXPECT_NEAR(r.integrate([](const Vec2& y) { return std::log((y - Vec2(0.3, -0.2)).norm()); }), -pi / 2, 1e-8);
    EXPECT_NEAR(r.integrate([](const Vec2& y) { return 1.0 / (y - Vec2(0.3, -0.2)).norm(); }), 2 * pi, 1e-8);
    EXPECT_NEAR(singular_disk_rule(Vec2::Zero(), 2.0, 8).total_weight(), 4 * pi, 1e-12 * 4 * pi);
}

TEST(ArcRule, LengthsAndOscillatory) {
    EXPECT_NEAR(arc_rule(Vec2::Zero(), 2.0, 0.0, pi / 2, 8).total_weight(), pi, 1e-14);
    EXPECT_NEAR(arc_rule(Vec2::Zero(), 1.0, -pi / 2, pi / 2, 16).integrate([](const Vec2& x) { return x.x(); }), 2.0,
                1e-14);
    const Rule2 r = arc_rule(Vec2::Zero(), 1.0, 0.1, 2.9, 200);
    const std::complex<double> got = r.integrate([](const Vec2& x) {
        return std::exp(std::complex<double>(0.0, 40.0 * std::atan2(x.y(), x.x())));
    });
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> exact = (std::exp(40.0 * i * 2.9) - std::exp(40.0 * i * 0.1)) / (40.0 * i);
    EXPECT_NEAR(std::abs(got - exact), 0.0, 1e-10);
    EXPECT_THROW(arc_rule(Vec2::Zero(), 1.0, 1.0, 0.5, 8), DomainError);
}

TEST(PolygonRule, SquareMomentsAndFourier) {
    const Rule2 r = polygon_rule(unit_square());
    EXPECT_TRUE(rule_positive(r));
    EXPECT_NEAR(r.total_weight(), 1.0, 1e-14);
    EXPECT_NEAR(r.integrate([](const Vec2& x) { return x.x(); }), 0.5, 1e-14);
    const Vec2 k(7.3, -2.1);
    const std::complex<double> i(0.0, 1.0);
    const auto got = r.integrate([&](const Vec2& x) { return std::exp(-i * k.dot(x)); });
    auto f = [&](double kk) { return (1.0 - std::exp(-i * kk)) / (i * kk); };
    EXPECT_NEAR(std::abs(got - f(k.x()) * f(k.y())), 0.0, 1e-9);
}

TEST(PolygonRule, WeightSumsEqualArea) {
    const ConvexPolygon poly({{0, 0}, {2, 0.3}, {2.4, 1.7}, {0.8, 2.2}, {-0.5, 1.0}});
    EXPECT_NEAR(polygon_rule(poly, 6, 2).total_weight(), poly.area(), 1e-12 * poly.area());
    EXPECT_NEAR(disk_rule(Vec2(1, 1), 0.5, 8, 16).total_weight(), pi / 4, 1e-12);
}
