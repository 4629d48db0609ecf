#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "geometry.hpp"

namespace elasticorner {

struct GaussRule1D {
    std::vector<double> x;  ///< nodes on [-1, 1]
    std::vector<double> w;
};

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration and cached.
inline const GaussRule1D& gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre: order must be >= 1");
    static std::mutex mtx;
    static std::map<int, GaussRule1D> cache;
    std::lock_guard lock(mtx);
    if (auto it = cache.find(n); it != cache.end()) return it->second;

    GaussRule1D r;
    r.x.resize(n);
    r.w.resize(n);
    // Legendre P_n(z) and P_n'(z) by the three-term recurrence.
    const auto legendre = [n](double z) {
        double p0 = 1.0;
        double p1 = z;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        return std::pair{p1, n * (z * p1 - p0) / (z * z - 1.0)};
    };
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(z);
            const double dz = p / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const double dp = legendre(z).second;
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    return cache.emplace(n, std::move(r)).first->second;
}

/// Gauss-Legendre rule mapped to [a, b].
inline std::vector<std::pair<double, double>> gauss_on(double a, double b, int n) {
    const auto& g = gauss_legendre(n);
    std::vector<std::pair<double, double>> out(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) out[i] = {mid + half * g.x[i], half * g.w[i]};
    return out;
}

enum class DomainTag { Segment, Arc, SectorBall, Polygon, DiskPolar, Box };

inline std::string_view to_string(DomainTag t) {
    switch (t) {
        case DomainTag::Segment: return "segment";
        case DomainTag::Arc: return "arc";
        case DomainTag::SectorBall: return "sector-ball";
        case DomainTag::Polygon: return "polygon";
        case DomainTag::DiskPolar: return "disk-polar";
        case DomainTag::Box: return "box";
    }
    return "unknown";
}

/// Immutable set of nodes and positive weights.
template <int Dim>
struct QuadratureRule {
    using Point = Eigen::Matrix<double, Dim, 1>;

    std::vector<Point> nodes;
    std::vector<double> weights;
    DomainTag tag = DomainTag::Segment;

    std::size_t size() const { return nodes.size(); }

    double total_weight() const {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }

    template <class F>
    auto integrate(F&& f) const {
        using R = decltype(f(nodes.front()));
        R acc = f(nodes.front()) * weights.front();
        for (std::size_t i = 1; i < nodes.size(); ++i) acc += f(nodes[i]) * weights[i];
        return acc;
    }
};

using Rule2 = QuadratureRule<2>;

inline Rule2 segment_rule(const Vec2& a, const Vec2& b, int order) {
    Rule2 r;
    r.tag = DomainTag::Segment;
    const double len = (b - a).norm();
    for (const auto& [t, w] : gauss_on(0.0, 1.0, order)) {
        r.nodes.push_back(a + t * (b - a));
        r.weights.push_back(w * len);
    }
    return r;
}

/// Gauss-Legendre in angle with arclength weights, optionally split into equal panels.
inline Rule2 arc_rule(const Vec2& center, double radius, double angle_lo, double angle_hi, int order,
                      int panels = 1) {
    if (!(angle_lo < angle_hi)) throw DomainError("arc_rule: angle_lo must be < angle_hi");
    if (!(radius > 0.0)) throw DomainError("arc_rule: radius must be positive");
    Rule2 r;
    r.tag = DomainTag::Arc;
    const double step = (angle_hi - angle_lo) / panels;
    for (int p = 0; p < panels; ++p)
        for (const auto& [th, w] : gauss_on(angle_lo + p * step, angle_lo + (p + 1) * step, order)) {
            r.nodes.push_back(center + radius * Vec2(std::cos(th), std::sin(th)));
            r.weights.push_back(w * radius);
        }
    return r;
}

/// Options for polar rules with geometric radial grading toward the origin.
struct PolarRuleOptions {
    int levels = 40;          ///< graded radial panels [r q^{k+1}, r q^k]
    double ratio = 0.5;       ///< q
    int radial_order = 8;     ///< Gauss points per radial panel
    int angular_order = 16;   ///< Gauss points per angular panel
    int angular_panels = 1;
};

/// Polar rule on {center + rho (cos t, sin t): 0 < rho < radius, lo < t < hi},
/// graded geometrically toward rho = 0.
inline Rule2 graded_polar_rule(const Vec2& center, double radius, double lo, double hi,
                               const PolarRuleOptions& opt, DomainTag tag) {
    if (!(radius > 0.0)) throw DomainError("graded_polar_rule: radius must be positive");
    Rule2 r;
    r.tag = tag;
    std::vector<std::pair<double, double>> radial;
    double outer = radius;
    for (int k = 0; k < opt.levels; ++k) {
        const double inner = outer * opt.ratio;
        for (const auto& node : gauss_on(inner, outer, opt.radial_order)) radial.push_back(node);
        outer = inner;
    }
    for (const auto& node : gauss_on(0.0, outer, opt.radial_order)) radial.push_back(node);

    const double step = (hi - lo) / opt.angular_panels;
    for (int p = 0; p < opt.angular_panels; ++p)
        for (const auto& [th, wt] : gauss_on(lo + p * step, lo + (p + 1) * step, opt.angular_order)) {
            const Vec2 dir(std::cos(th), std::sin(th));
            for (const auto& [rho, wr] : radial) {
                r.nodes.push_back(center + rho * dir);
                r.weights.push_back(wt * wr * rho);
            }
        }
    return r;
}

/// Graded polar rule on the cone ball K cap B(0, radius) in local chart coordinates.
inline Rule2 sector_ball_rule(const Sector& sector, double radius, const PolarRuleOptions& opt = {}) {
    return graded_polar_rule(Vec2::Zero(), radius, sector.theta_m(), sector.theta_M(), opt,
                             DomainTag::SectorBall);
}

inline Rule2 sector_ball_rule(const CornerChart& chart, int radial_levels = 40, int angular_order = 16) {
    PolarRuleOptions opt;
    opt.levels = radial_levels;
    opt.angular_order = angular_order;
    if (radial_levels < 1) throw DomainError("sector_ball_rule: levels must be >= 1");
    if (angular_order < 2) throw DomainError("sector_ball_rule: order must be >= 2");
    return sector_ball_rule(chart.sector, chart.h, opt);
}

/// Polar rule centred on a (weakly) singular point: the Jacobian rho cancels
/// 1/rho and the grading resolves rho log rho.
inline Rule2 singular_disk_rule(const Vec2& center, double radius, int order) {
    if (!(radius > 0.0)) throw DomainError("singular_disk_rule: radius must be positive");
    PolarRuleOptions opt;
    opt.levels = 30;
    opt.radial_order = order;
    opt.angular_order = 2 * order;
    return graded_polar_rule(center, radius, 0.0, 2.0 * std::numbers::pi, opt, DomainTag::DiskPolar);
}

/// Collapsed (conical product) Gauss rule on a triangle; positive weights,
/// exact for polynomials of degree 2 * order - 2.
inline void append_triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int order, Rule2& r) {
    const double twice_area = std::abs(cross2(b - a, c - a));
    const auto u_rule = gauss_on(0.0, 1.0, order);
    for (const auto& [u, wu] : u_rule)
        for (const auto& [v, wv] : u_rule) {
            r.nodes.push_back(a + u * (b - a) + u * v * (c - b));
            r.weights.push_back(wu * wv * u * twice_area);
        }
}

inline void append_subdivided_triangle(const Vec2& a, const Vec2& b, const Vec2& c, int order, int levels,
                                       Rule2& r) {
    if (levels == 0) {
        append_triangle_rule(a, b, c, order, r);
        return;
    }
    const Vec2 ab = 0.5 * (a + b);
    const Vec2 bc = 0.5 * (b + c);
    const Vec2 ca = 0.5 * (c + a);
    append_subdivided_triangle(a, ab, ca, order, levels - 1, r);
    append_subdivided_triangle(ab, b, bc, order, levels - 1, r);
    append_subdivided_triangle(ca, bc, c, order, levels - 1, r);
    append_subdivided_triangle(ab, bc, ca, order, levels - 1, r);
}

/// Fan triangulation from the centroid with triangle Gauss rules.
inline Rule2 polygon_rule(const ConvexPolygon& poly, int order = 10, int subdivisions = 0) {
    Rule2 r;
    r.tag = DomainTag::Polygon;
    const Vec2 c = poly.centroid();
    for (std::size_t i = 0; i < poly.size(); ++i)
        append_subdivided_triangle(c, poly.vertex(i), poly.vertex(i + 1), order, subdivisions, r);
    return r;
}

/// Polar rule on a disk about its centre without grading (smooth integrands).
inline Rule2 disk_rule(const Vec2& center, double radius, int radial_order, int angular_order) {
    Rule2 r;
    r.tag = DomainTag::DiskPolar;
    for (const auto& [th, wt] : gauss_on(0.0, 2.0 * std::numbers::pi, angular_order))
        for (const auto& [rho, wr] : gauss_on(0.0, radius, radial_order)) {
            r.nodes.push_back(center + rho * Vec2(std::cos(th), std::sin(th)));
            r.weights.push_back(wt * wr * rho);
        }
    return r;
}

}  // namespace elasticorner
