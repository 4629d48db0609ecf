#pragma once

// Compactly supported source f = chi_Omega phi with polynomial phi.

#include <cmath>
#include <variant>

#include "elastic_core.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "polynomial.hpp"

namespace elasticorner {

struct DiskSupport {
    Vec2 center = Vec2::Zero();
    double radius = 1.0;
};

/// Ball centred at the origin (3D).
struct BallSupport {
    double radius = 1.0;
};

using Support = std::variant<ConvexPolygon, DiskSupport, BallSupport>;

/// (a Delta + (lambda + mu) grad div + omega^2) w for a polynomial field w,
/// a = mu (standard) or lambda (paper).
template <int Dim>
PolyVec<Dim> navier_polynomial(const PolyVec<Dim>& w, const LameParameters& m, double omega,
                               OperatorConvention conv = OperatorConvention::Standard) {
    Polynomial<Dim> div;
    for (int j = 0; j < Dim; ++j) div += w[j].derivative(j);
    PolyVec<Dim> out;
    for (int i = 0; i < Dim; ++i) {
        Polynomial<Dim> lap;
        for (int j = 0; j < Dim; ++j) lap += w[i].derivative(j).derivative(j);
        out[i] = lap * cplx(m.laplace_coefficient(conv)) + div.derivative(i) * cplx(m.lambda() + m.mu()) +
                 w[i] * cplx(omega * omega);
    }
    return out;
}

class SourceScene {
public:
    SourceScene(Support support, PolyVec<2> density, const LameParameters& material, double omega,
                OperatorConvention convention = OperatorConvention::Paper, double holder_alpha = 1.0)
        : support_(std::move(support)), density2_(std::move(density)), material_(material),
          freq_(omega, material), convention_(convention), holder_alpha_(holder_alpha) {
        if (material.dim() != 2) throw DomainError("SourceScene: planar support needs a 2D material");
        if (std::holds_alternative<BallSupport>(support_)) throw DomainError("SourceScene: ball support needs 3D");
        if (const auto* d = std::get_if<DiskSupport>(&support_); d && !(d->radius > 0.0))
            throw GeometryError("SourceScene: disk radius must be positive");
        check_alpha();
    }

    SourceScene(BallSupport ball, PolyVec<3> density, const LameParameters& material, double omega,
                OperatorConvention convention = OperatorConvention::Paper, double holder_alpha = 1.0)
        : support_(ball), density3_(std::move(density)), material_(material), freq_(omega, material),
          convention_(convention), holder_alpha_(holder_alpha) {
        if (material.dim() != 3) throw DomainError("SourceScene: ball support needs a 3D material");
        if (!(ball.radius > 0.0)) throw GeometryError("SourceScene: ball radius must be positive");
        check_alpha();
    }

    int dim() const { return material_.dim(); }
    const Support& support() const { return support_; }
    const PolyVec<2>& density() const { return density2_; }
    const PolyVec<3>& density3() const { return density3_; }
    const LameParameters& material() const { return material_; }
    const Wavenumbers& freq() const { return freq_; }
    OperatorConvention convention() const { return convention_; }
    double holder_alpha() const { return holder_alpha_; }

    bool is_polygon() const { return std::holds_alternative<ConvexPolygon>(support_); }
    const ConvexPolygon& polygon() const {
        if (!is_polygon()) throw CapabilityError("SourceScene: support is not a polygon");
        return std::get<ConvexPolygon>(support_);
    }

    bool density_is_zero() const {
        for (const auto& p : density2_)
            if (!p.is_zero()) return false;
        for (const auto& p : density3_)
            if (!p.is_zero()) return false;
        return true;
    }

    /// Planar support diameter.
    double diameter() const {
        if (const auto* p = std::get_if<ConvexPolygon>(&support_)) return p->diameter();
        if (const auto* d = std::get_if<DiskSupport>(&support_)) return 2.0 * d->radius;
        return 2.0 * std::get<BallSupport>(support_).radius;
    }

    /// Distance from x to the support, zero inside.
    double distance_to_support(const Vec2& x) const {
        if (const auto* p = std::get_if<ConvexPolygon>(&support_)) return std::max(0.0, -p->signed_distance(x));
        if (const auto* d = std::get_if<DiskSupport>(&support_)) return std::max(0.0, (x - d->center).norm() - d->radius);
        throw CapabilityError("SourceScene: planar distance on a 3D scene");
    }

    bool contains(const Vec2& x) const {
        if (const auto* p = std::get_if<ConvexPolygon>(&support_)) return p->contains(x);
        if (const auto* d = std::get_if<DiskSupport>(&support_)) return (x - d->center).norm() < d->radius;
        throw CapabilityError("SourceScene: planar containment on a 3D scene");
    }

    /// f(x) = chi phi(x).
    CVec<2> source(const Vec2& x) const { return contains(x) ? evaluate(density2_, x) : CVec<2>::Zero(); }

    /// Same scene with the density replaced.
    SourceScene with_density(PolyVec<2> density) const {
        SourceScene s = *this;
        s.density2_ = std::move(density);
        return s;
    }

private:
    void check_alpha() const {
        if (!(holder_alpha_ > 0.0 && holder_alpha_ <= 1.0))
            throw DomainError("SourceScene: holder_alpha must lie in (0, 1]");
    }

    Support support_;
    PolyVec<2> density2_{};
    PolyVec<3> density3_{};
    LameParameters material_;
    Wavenumbers freq_;
    OperatorConvention convention_;
    double holder_alpha_;
};

}  // namespace elasticorner
