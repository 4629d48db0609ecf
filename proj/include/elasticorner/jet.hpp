#pragma once

// Second-order forward-mode differentiation over complex values.
//
// A Jet<N> carries f, grad f and the Hessian of f with respect to N real
// coordinates. Fields written as generic callables over Jet produce exact
// first and second derivatives, which is what the Navier operator and the
// boundary traction consume.

#include <array>
#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace elasticorner {

using cplx = std::complex<double>;

template <int N>
struct Jet {
    using Grad = Eigen::Matrix<cplx, N, 1>;
    using Hess = Eigen::Matrix<cplx, N, N>;

    cplx v{0.0};
    Grad g = Grad::Zero();
    Hess h = Hess::Zero();

    Jet() = default;
    Jet(double c) : v(c) {}  // NOLINT(google-explicit-constructor)
    Jet(cplx c) : v(c) {}    // NOLINT(google-explicit-constructor)
    Jet(cplx value, const Grad& grad, const Hess& hess) : v(value), g(grad), h(hess) {}

    /// The coordinate x_i evaluated at value x.
    static Jet variable(double x, int i) {
        Jet j(x);
        j.g(i) = 1.0;
        return j;
    }

    Jet& operator+=(const Jet& o) {
        v += o.v;
        g += o.g;
        h += o.h;
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        v -= o.v;
        g -= o.g;
        h -= o.h;
        return *this;
    }
    Jet& operator*=(const Jet& o) {
        h = h * o.v + o.h * v + g * o.g.transpose() + o.g * g.transpose();
        g = g * o.v + o.g * v;
        v *= o.v;
        return *this;
    }
    Jet& operator*=(cplx c) {
        v *= c;
        g *= c;
        h *= c;
        return *this;
    }
};

template <int N>
Jet<N> operator+(Jet<N> a, const Jet<N>& b) { return a += b; }
template <int N>
Jet<N> operator-(Jet<N> a, const Jet<N>& b) { return a -= b; }
template <int N>
Jet<N> operator*(Jet<N> a, const Jet<N>& b) { return a *= b; }
template <int N>
Jet<N> operator-(Jet<N> a) { return a *= cplx(-1.0); }
template <int N>
Jet<N> operator*(Jet<N> a, cplx c) { return a *= c; }
template <int N>
Jet<N> operator*(cplx c, Jet<N> a) { return a *= c; }
template <int N>
Jet<N> operator*(Jet<N> a, double c) { return a *= cplx(c); }
template <int N>
Jet<N> operator*(double c, Jet<N> a) { return a *= cplx(c); }
template <int N>
Jet<N> operator+(Jet<N> a, cplx c) {
    a.v += c;
    return a;
}
template <int N>
Jet<N> operator+(cplx c, Jet<N> a) { return a + c; }
template <int N>
Jet<N> operator-(Jet<N> a, cplx c) { return a + (-c); }
template <int N>
Jet<N> operator-(cplx c, Jet<N> a) { return -a + c; }

/// Chain rule for a scalar function with value f0, derivative f1, second derivative f2 at a.v.
template <int N>
Jet<N> compose(const Jet<N>& a, cplx f0, cplx f1, cplx f2) {
    Jet<N> r;
    r.v = f0;
    r.g = f1 * a.g;
    r.h = f1 * a.h + f2 * (a.g * a.g.transpose());
    return r;
}

template <int N>
Jet<N> exp(const Jet<N>& a) {
    const cplx e = std::exp(a.v);
    return compose(a, e, e, e);
}

/// Principal square root (branch cut on the negative real axis).
template <int N>
Jet<N> sqrt(const Jet<N>& a) {
    const cplx r = std::sqrt(a.v);
    return compose(a, r, 0.5 / r, -0.25 / (r * a.v));
}

template <int N>
Jet<N> reciprocal(const Jet<N>& a) {
    const cplx r = 1.0 / a.v;
    return compose(a, r, -r * r, 2.0 * r * r * r);
}

template <int N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) { return a * reciprocal(b); }

/// Nonnegative integer power.
template <int N>
Jet<N> pow(const Jet<N>& a, int n) {
    if (n == 0) return Jet<N>(1.0);
    if (n == 1) return a;
    // n >= 2 keeps a^(n-2) finite at a = 0.
    cplx pn2 = 1.0;
    for (int k = 0; k < n - 2; ++k) pn2 *= a.v;
    return compose(a, pn2 * a.v * a.v, static_cast<double>(n) * pn2 * a.v,
                   static_cast<double>(n) * (n - 1) * pn2);
}

template <int N>
using JetVec = std::array<Jet<N>, N>;

/// A smooth vector field R^N -> C^N written over jets.
template <int N>
using JetField = std::function<JetVec<N>(const JetVec<N>&)>;

template <int N>
JetVec<N> seed(const Eigen::Matrix<double, N, 1>& x) {
    JetVec<N> out;
    for (int i = 0; i < N; ++i) out[i] = Jet<N>::variable(x(i), i);
    return out;
}

}  // namespace elasticorner
