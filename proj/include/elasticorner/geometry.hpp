#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace elasticorner {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Rotation of a point by angle a about the origin.
inline Vec2 rotate(const Vec2& p, double a) {
    const double c = std::cos(a);
    const double s = std::sin(a);
    return {c * p.x() - s * p.y(), s * p.x() + c * p.y()};
}

/// Open planar cone {x != 0 : theta_m < arg x < theta_M} with -pi < theta_m < theta_M < pi.
class Sector {
public:
    Sector(double theta_m, double theta_M) : theta_m_(theta_m), theta_M_(theta_M) {
        if (!(theta_m > -std::numbers::pi && theta_m < theta_M && theta_M < std::numbers::pi))
            throw GeometryError("Sector: angles must satisfy -pi < theta_m < theta_M < pi");
    }

    /// Cone of the given opening symmetric about the positive real axis.
    static Sector symmetric(double opening) { return Sector(-0.5 * opening, 0.5 * opening); }

    double theta_m() const { return theta_m_; }
    double theta_M() const { return theta_M_; }
    double opening() const { return theta_M_ - theta_m_; }

    /// min of cos(theta/2) over the cone; cos(theta/2) is concave on (-pi, pi) so an endpoint attains it.
    double delta() const { return std::min(std::cos(0.5 * theta_m_), std::cos(0.5 * theta_M_)); }

    bool contains_angle(double theta) const { return theta > theta_m_ && theta < theta_M_; }
    bool contains(const Vec2& x) const {
        if (x.squaredNorm() == 0.0) return false;
        return contains_angle(std::atan2(x.y(), x.x()));
    }

private:
    double theta_m_;
    double theta_M_;
};

/// Strictly convex polygon with counterclockwise vertices.
class ConvexPolygon {
public:
    explicit ConvexPolygon(std::vector<Vec2> vertices) : v_(std::move(vertices)) {
        const std::size_t n = v_.size();
        if (n < 3) throw GeometryError("ConvexPolygon: at least 3 vertices required");
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& a = v_[i];
            const Vec2& b = v_[(i + 1) % n];
            const Vec2& c = v_[(i + 2) % n];
            if ((b - a).norm() == 0.0) throw GeometryError("ConvexPolygon: repeated vertex");
            const double cr = cross2(b - a, c - b);
            if (!(cr > 1e-14 * (b - a).norm() * (c - b).norm()))
                throw GeometryError("ConvexPolygon: vertices must be strictly convex and counterclockwise");
        }
    }

    const std::vector<Vec2>& vertices() const { return v_; }
    std::size_t size() const { return v_.size(); }
    const Vec2& vertex(std::size_t i) const { return v_[i % v_.size()]; }

    double area() const {
        double a = 0.0;
        for (std::size_t i = 0; i < v_.size(); ++i) a += cross2(vertex(i), vertex(i + 1));
        return 0.5 * a;
    }

    Vec2 centroid() const {
        Vec2 c = Vec2::Zero();
        double a = 0.0;
        for (std::size_t i = 0; i < v_.size(); ++i) {
            const double w = cross2(vertex(i), vertex(i + 1));
            c += w * (vertex(i) + vertex(i + 1));
            a += w;
        }
        return c / (3.0 * a);
    }

    double diameter() const {
        double d = 0.0;
        for (const auto& a : v_)
            for (const auto& b : v_) d = std::max(d, (a - b).norm());
        return d;
    }

    /// Signed distance to the boundary: positive inside.
    double signed_distance(const Vec2& x) const {
        double inside = std::numeric_limits<double>::infinity();
        bool is_inside = true;
        double outside = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < v_.size(); ++i) {
            const Vec2 a = vertex(i);
            const Vec2 b = vertex(i + 1);
            const Vec2 e = b - a;
            const double side = cross2(e, x - a) / e.norm();
            if (side <= 0.0) is_inside = false;
            inside = std::min(inside, side);
            const double t = std::clamp((x - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
            outside = std::min(outside, (a + t * e - x).norm());
        }
        return is_inside ? inside : -outside;
    }

    bool contains(const Vec2& x) const { return signed_distance(x) > 0.0; }

    /// Interior angle at vertex i.
    double interior_angle(std::size_t i) const {
        const Vec2 to_prev = vertex(i + v_.size() - 1) - vertex(i);
        const Vec2 to_next = vertex(i + 1) - vertex(i);
        return std::acos(std::clamp(to_prev.normalized().dot(to_next.normalized()), -1.0, 1.0));
    }

private:
    std::vector<Vec2> v_;
};

/// Local frame at a corner: the vertex is moved to the origin and the cone
/// rotated symmetric about the positive x_1 axis, so that the cone ball
/// K cap B(0, h) coincides with the rotated polygon near the vertex.
struct CornerChart {
    Vec2 vertex = Vec2::Zero();
    Sector sector = Sector::symmetric(std::numbers::pi / 2);
    double rotation = 0.0;  ///< local = rotate(global - vertex, -rotation)
    double h = 1.0;

    Vec2 to_local(const Vec2& x) const { return rotate(x - vertex, -rotation); }
    Vec2 to_global(const Vec2& y) const { return vertex + rotate(y, rotation); }
    /// Rotates a vector (no translation) from local to global coordinates.
    Vec2 direction_to_global(const Vec2& d) const { return rotate(d, rotation); }
};

/// Chart on a synthetic symmetric cone, used when no polygon is involved.
inline CornerChart synthetic_chart(double opening, double h) {
    if (!(opening > 0.0 && opening < std::numbers::pi))
        throw GeometryError("synthetic_chart: opening must lie in (0, pi)");
    if (!(h > 0.0)) throw GeometryError("synthetic_chart: radius must be positive");
    CornerChart c;
    c.sector = Sector::symmetric(opening);
    c.h = h;
    return c;
}

inline double point_segment_distance(const Vec2& x, const Vec2& a, const Vec2& b) {
    const Vec2 e = b - a;
    const double t = std::clamp((x - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
    return (a + t * e - x).norm();
}

inline CornerChart corner_chart(const ConvexPolygon& poly, int vertex_index) {
    const int n = static_cast<int>(poly.size());
    if (vertex_index < 0 || vertex_index >= n) throw DomainError("corner_chart: vertex index out of range");
    const Vec2 v = poly.vertex(vertex_index);
    const Vec2 to_prev = poly.vertex(vertex_index + n - 1) - v;
    const Vec2 to_next = poly.vertex(vertex_index + 1) - v;
    if (std::abs(cross2(to_next, to_prev)) < 1e-14 * to_next.norm() * to_prev.norm())
        throw GeometryError("corner_chart: degenerate (collinear) vertex");

    const double opening = poly.interior_angle(vertex_index);
    const Vec2 bisector = (to_prev.normalized() + to_next.normalized()).normalized();

    double dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        // Edges i -> i+1 that do not touch the vertex.
        if (i == vertex_index || (i + 1) % n == vertex_index) continue;
        dist = std::min(dist, point_segment_distance(v, poly.vertex(i), poly.vertex(i + 1)));
    }

    CornerChart c;
    c.vertex = v;
    c.sector = Sector::symmetric(opening);
    c.rotation = std::atan2(bisector.y(), bisector.x());
    c.h = 0.5 * dist;
    return c;
}

}  // namespace elasticorner
