#pragma once

// Navier operator, boundary traction, fundamental solutions and Green's tensor.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "errors.hpp"
#include "geometry.hpp"
#include "jet.hpp"
#include "special_functions.hpp"

namespace elasticorner {

/// Leading block of the Navier operator: a Delta + (lambda + mu) grad div with
/// a = lambda (paper) or a = mu (standard Lame operator).
enum class OperatorConvention { Paper, Standard };

inline std::string_view to_string(OperatorConvention c) {
    return c == OperatorConvention::Paper ? "paper" : "standard";
}

inline OperatorConvention parse_convention(std::string_view s) {
    if (s == "paper") return OperatorConvention::Paper;
    if (s == "standard") return OperatorConvention::Standard;
    throw ParseError("convention must be 'paper' or 'standard', got '" + std::string(s) + "'");
}

/// Lame pair with the strong convexity condition mu > 0, dim lambda + 2 mu > 0.
class LameParameters {
public:
    LameParameters(double lambda, double mu, int dim = 2) : lambda_(lambda), mu_(mu), dim_(dim) {
        if (dim != 2 && dim != 3) throw DomainError("LameParameters: dim must be 2 or 3");
        if (!std::isfinite(lambda) || !std::isfinite(mu)) throw DomainError("LameParameters: non-finite value");
        if (!(mu > 0.0)) throw ConvexityError("LameParameters: mu must be positive", mu);
        if (!(convexity_margin() > 0.0))
            throw ConvexityError("LameParameters: strong convexity violated, dim*lambda + 2*mu = " +
                                     std::to_string(convexity_margin()),
                                 convexity_margin());
    }

    double lambda() const { return lambda_; }
    double mu() const { return mu_; }
    int dim() const { return dim_; }
    double convexity_margin() const { return dim_ * lambda_ + 2.0 * mu_; }

    /// Coefficient of the Laplacian block.
    double laplace_coefficient(OperatorConvention c) const {
        return c == OperatorConvention::Paper ? lambda_ : mu_;
    }

private:
    double lambda_;
    double mu_;
    int dim_;
};

struct Wavenumbers {
    double omega;
    double omega_p;
    double omega_s;

    Wavenumbers(double w, const LameParameters& m) : omega(w) {
        if (!(w > 0.0)) throw DomainError("Wavenumbers: omega must be positive");
        if (!(m.lambda() + 2.0 * m.mu() > 0.0))
            throw ConvexityError("Wavenumbers: lambda + 2 mu must be positive", m.lambda() + 2.0 * m.mu());
        omega_p = w / std::sqrt(m.lambda() + 2.0 * m.mu());
        omega_s = w / std::sqrt(m.mu());
    }
};

template <int N>
using CVec = Eigen::Matrix<cplx, N, 1>;
template <int N>
using CMat = Eigen::Matrix<cplx, N, N>;
template <int N>
using RVec = Eigen::Matrix<double, N, 1>;

/// Navier operator applied to a jet field.
template <int N>
CVec<N> navier_apply(const JetField<N>& u, const LameParameters& m, const RVec<N>& x,
                     OperatorConvention conv = OperatorConvention::Paper) {
    const JetVec<N> ux = u(seed<N>(x));
    const double a = m.laplace_coefficient(conv);
    const double b = m.lambda() + m.mu();
    CVec<N> grad_div = CVec<N>::Zero();
    for (int j = 0; j < N; ++j) grad_div += ux[j].h.col(j);
    CVec<N> out;
    for (int i = 0; i < N; ++i) out(i) = a * ux[i].h.trace() + b * grad_div(i);
    return out;
}

/// Navier operator from central differences of a point-valued field (second order in h).
template <int N>
CVec<N> navier_apply_fd(const std::function<CVec<N>(const RVec<N>&)>& u, const LameParameters& m,
                        const RVec<N>& x, double h, OperatorConvention conv = OperatorConvention::Paper) {
    if (!(h > 0.0)) throw DomainError("navier_apply_fd: step must be positive");
    const CVec<N> u0 = u(x);
    // H[j][k] = d_j d_k u (vector)
    std::array<std::array<CVec<N>, N>, N> H;
    for (int j = 0; j < N; ++j) {
        RVec<N> ej = RVec<N>::Zero();
        ej(j) = h;
        H[j][j] = (u(x + ej) - 2.0 * u0 + u(x - ej)) / (h * h);
        for (int k = j + 1; k < N; ++k) {
            RVec<N> ek = RVec<N>::Zero();
            ek(k) = h;
            H[j][k] = (u(x + ej + ek) - u(x + ej - ek) - u(x - ej + ek) + u(x - ej - ek)) / (4.0 * h * h);
            H[k][j] = H[j][k];
        }
    }
    const double a = m.laplace_coefficient(conv);
    const double b = m.lambda() + m.mu();
    CVec<N> out = CVec<N>::Zero();
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) out(i) += a * H[j][j](i) + b * H[i][j](j);
    return out;
}

/// Jacobian J(i, j) = d_j u_i of a jet field.
template <int N>
CMat<N> jacobian(const JetField<N>& u, const RVec<N>& x) {
    const JetVec<N> ux = u(seed<N>(x));
    CMat<N> J;
    for (int i = 0; i < N; ++i) J.row(i) = ux[i].g.transpose();
    return J;
}

template <int N>
CMat<N> jacobian_fd(const std::function<CVec<N>(const RVec<N>&)>& u, const RVec<N>& x, double h) {
    CMat<N> J;
    for (int j = 0; j < N; ++j) {
        RVec<N> e = RVec<N>::Zero();
        e(j) = h;
        J.col(j) = (u(x + e) - u(x - e)) / (2.0 * h);
    }
    return J;
}

inline void require_unit(double norm, const char* who) {
    if (std::abs(norm - 1.0) > 1e-12) throw DomainError(std::string(who) + ": normal must be a unit vector");
}

/// 2 mu du/dnu + lambda nu div u + mu nu^perp (d2 u1 - d1 u2) in 2D,
/// 2 mu du/dnu + lambda nu div u + mu nu x curl u in 3D. Equals sigma(u) nu.
template <int N>
CVec<N> traction_from_jacobian(const CMat<N>& J, const LameParameters& m, const RVec<N>& nu) {
    require_unit(nu.norm(), "boundary_traction");
    const CVec<N> n = nu.template cast<cplx>();
    const cplx div = J.trace();
    CVec<N> t = 2.0 * m.mu() * (J * n) + m.lambda() * div * n;
    if constexpr (N == 2) {
        const cplx c = J(0, 1) - J(1, 0);
        t += m.mu() * c * CVec<2>(-n(1), n(0));
    } else {
        const CVec<3> curl(J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1));
        t += m.mu() * CVec<3>(n(1) * curl(2) - n(2) * curl(1), n(2) * curl(0) - n(0) * curl(2),
                              n(0) * curl(1) - n(1) * curl(0));
    }
    return t;
}

/// Conormal derivative matched to the chosen operator convention, i.e. the
/// boundary operator for which Green's formula holds. Under the standard
/// convention this is the traction; under the paper convention it is the
/// traction plus (lambda - mu) du/dnu.
template <int N>
CVec<N> conormal_from_jacobian(const CMat<N>& J, const LameParameters& m, const RVec<N>& nu,
                               OperatorConvention conv) {
    CVec<N> t = traction_from_jacobian<N>(J, m, nu);
    if (conv == OperatorConvention::Paper) t += (m.lambda() - m.mu()) * (J * nu.template cast<cplx>());
    return t;
}

template <int N>
CVec<N> boundary_traction(const JetField<N>& u, const LameParameters& m, const RVec<N>& x, const RVec<N>& nu) {
    return traction_from_jacobian<N>(jacobian<N>(u, x), m, nu);
}

template <int N>
CVec<N> boundary_traction_fd(const std::function<CVec<N>(const RVec<N>&)>& u, const LameParameters& m,
                             const RVec<N>& x, const RVec<N>& nu, double h) {
    return traction_from_jacobian<N>(jacobian_fd<N>(u, x, h), m, nu);
}

/// Radial profile F(r) of the Helmholtz fundamental solution with F', F''.
struct RadialProfile {
    cplx f;
    cplx df;
    cplx d2f;
};

inline RadialProfile helmholtz_radial(double r, double k, int dim) {
    if (!(r > 0.0)) throw DomainError("helmholtz_fundamental: x and y coincide");
    const cplx i(0.0, 1.0);
    if (dim == 2) {
        if (!(k > 0.0)) throw DomainError("helmholtz_fundamental: 2D requires k > 0");
        const double kr = k * r;
        const cplx h0 = special::hankel1_zero(kr);
        const cplx h1 = special::hankel1_one(kr);
        return {0.25 * i * h0, -0.25 * i * k * h1, -0.25 * i * k * k * (h0 - h1 / kr)};
    }
    if (dim == 3) {
        const cplx phi = std::exp(i * k * r) / (4.0 * std::numbers::pi * r);
        const cplx a = i * k - 1.0 / r;
        return {phi, phi * a, phi * (a * a + 1.0 / (r * r))};
    }
    throw DomainError("helmholtz_fundamental: dim must be 2 or 3");
}

/// (i/4) H_0(k|x-y|) in 2D, e^{ik|x-y|} / (4 pi |x-y|) in 3D.
template <int N>
cplx helmholtz_fundamental(const RVec<N>& x, const RVec<N>& y, double k) {
    return helmholtz_radial((x - y).norm(), k, N).f;
}

/// Hessian in x of a radial function: F'' rr^T + (F'/r)(I - rr^T).
template <int N>
CMat<N> radial_hessian(const RadialProfile& p, const RVec<N>& d) {
    const double r = d.norm();
    const RVec<N> e = d / r;
    const Eigen::Matrix<double, N, N> P = e * e.transpose();
    const Eigen::Matrix<double, N, N> I = Eigen::Matrix<double, N, N>::Identity();
    return p.d2f * P.template cast<cplx>() + (p.df / r) * (I - P).template cast<cplx>();
}

/// Kupradze tensor (1/mu) Phi_s I + (1/omega^2) Hess_x (Phi_s - Phi_p), which
/// satisfies (mu Delta + (lambda + mu) grad div + omega^2) G = -delta I.
template <int N>
CMat<N> green_tensor(const RVec<N>& x, const RVec<N>& y, const LameParameters& m, const Wavenumbers& k) {
    const RVec<N> d = x - y;
    const double r = d.norm();
    if (!(r > 0.0)) throw DomainError("green_tensor: x and y coincide");
    const RadialProfile ps = helmholtz_radial(r, k.omega_s, N);
    const RadialProfile pp = helmholtz_radial(r, k.omega_p, N);
    const RadialProfile diff{ps.f - pp.f, ps.df - pp.df, ps.d2f - pp.d2f};
    return (ps.f / m.mu()) * CMat<N>::Identity() + radial_hessian<N>(diff, d) / (k.omega * k.omega);
}

}  // namespace elasticorner
