#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "jet.hpp"

namespace elasticorner {

/// Multivariate polynomial with complex coefficients in Dim real variables.
template <int Dim>
class Polynomial {
public:
    using Exponent = std::array<int, Dim>;
    using Point = Eigen::Matrix<double, Dim, 1>;

    Polynomial() = default;

    static Polynomial constant(cplx c) {
        Polynomial p;
        p.add_term(Exponent{}, c);
        return p;
    }

    /// The coordinate x_i.
    static Polynomial coordinate(int i) {
        Exponent e{};
        e[i] = 1;
        Polynomial p;
        p.add_term(e, 1.0);
        return p;
    }

    void add_term(const Exponent& e, cplx c) {
        if (c == cplx(0.0)) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == cplx(0.0)) terms_.erase(it);
        }
    }

    const std::map<Exponent, cplx>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int degree() const {
        int d = 0;
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (int k : e) s += k;
            d = std::max(d, s);
        }
        return d;
    }

    cplx operator()(const Point& x) const {
        cplx acc = 0.0;
        for (const auto& [e, c] : terms_) {
            double m = 1.0;
            for (int i = 0; i < Dim; ++i)
                for (int k = 0; k < e[i]; ++k) m *= x(i);
            acc += c * m;
        }
        return acc;
    }

    Jet<Dim> operator()(const JetVec<Dim>& x) const {
        Jet<Dim> acc(0.0);
        for (const auto& [e, c] : terms_) {
            Jet<Dim> m(c);
            for (int i = 0; i < Dim; ++i)
                if (e[i] > 0) m *= elasticorner::pow(x[i], e[i]);
            acc += m;
        }
        return acc;
    }

    Polynomial derivative(int i) const {
        Polynomial out;
        for (const auto& [e, c] : terms_) {
            if (e[i] == 0) continue;
            Exponent d = e;
            d[i] -= 1;
            out.add_term(d, c * static_cast<double>(e[i]));
        }
        return out;
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Polynomial& operator*=(cplx s) {
        if (s == cplx(0.0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a += b * cplx(-1.0); }
    friend Polynomial operator*(Polynomial a, cplx s) { return a *= s; }
    friend Polynomial operator*(cplx s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial out;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponent e;
                for (int i = 0; i < Dim; ++i) e[i] = ea[i] + eb[i];
                out.add_term(e, ca * cb);
            }
        return out;
    }

    Polynomial pow(int n) const {
        Polynomial out = constant(1.0);
        for (int k = 0; k < n; ++k) out = out * *this;
        return out;
    }

private:
    std::map<Exponent, cplx> terms_;
};

/// Vector of Dim polynomial components (a polynomial displacement or density).
template <int Dim>
using PolyVec = std::array<Polynomial<Dim>, Dim>;

template <int Dim>
Eigen::Matrix<cplx, Dim, 1> evaluate(const std::array<Polynomial<Dim>, static_cast<std::size_t>(Dim)>& p, const Eigen::Matrix<double, Dim, 1>& x) {
    Eigen::Matrix<cplx, Dim, 1> out;
    for (int i = 0; i < Dim; ++i) out(i) = p[i](x);
    return out;
}

template <int Dim>
JetField<Dim> as_jet_field(const std::array<Polynomial<Dim>, static_cast<std::size_t>(Dim)>& p) {
    return [p](const JetVec<Dim>& x) {
        JetVec<Dim> out;
        for (int i = 0; i < Dim; ++i) out[i] = p[i](x);
        return out;
    };
}

}  // namespace elasticorner
