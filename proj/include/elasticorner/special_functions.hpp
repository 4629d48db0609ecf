#pragma once

// Bessel and Hankel functions needed by the planar Green's tensor and the
// ball Fourier transform. Only real positive arguments are supported.

#include <cmath>
#include <complex>
#include <numbers>

#include "errors.hpp"

namespace elasticorner::special {

using cplx = std::complex<double>;

struct SpecialFnAccuracy {
    double abs_tol = 1e-13;
    int max_terms = 400;
};

/// Above this argument the Hankel asymptotic expansion is used, below it the
/// ascending series. At x = 14 the two branches differ by about 2e-14.
inline constexpr double kAsymptoticSwitch = 14.0;

/// J_{n/2}(x) for n in {1, 3}, through the closed spherical forms.
inline double bessel_j_half(int order_num, double x) {
    if (!(x > 0.0)) throw DomainError("bessel_j_half: argument must be positive");
    const double pref = std::sqrt(2.0 / (std::numbers::pi * x));
    switch (order_num) {
        case 1:
            return pref * std::sin(x);
        case 3: {
            // sin x / x - cos x loses digits for small x; use the series there.
            if (x < 1e-2) {
                const double x2 = x * x;
                return pref * x * x2 * (1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0) / x;
            }
            return pref * (std::sin(x) / x - std::cos(x));
        }
        default:
            throw UnsupportedOrderError("bessel_j_half: only orders 1/2 and 3/2 are supported");
    }
}

namespace detail {

inline constexpr long double kEulerGamma = 0.57721566490153286060651209L;

struct SeriesPair {
    double j;
    double y;
};

// Ascending series for J_0, Y_0. Terms grow like e^x / sqrt(x) before they
// cancel, so the sums are carried in extended precision.
inline SeriesPair order_zero_series(double x, const SpecialFnAccuracy& acc) {
    using ld = long double;
    const ld q = -0.25L * x * x;
    ld term = 1.0L;
    ld j = 1.0L;
    ld harmonic = 0.0L;
    ld ysum = 0.0L;
    for (int k = 1; k < acc.max_terms; ++k) {
        term *= q / (static_cast<ld>(k) * k);
        harmonic += 1.0L / k;
        j += term;
        ysum += harmonic * term;
        if (std::abs(term) * (1.0L + harmonic) < 1e-21L * (1.0L + std::abs(j)) && k > x) break;
    }
    const ld log_part = std::log(0.5L * x) + static_cast<ld>(kEulerGamma);
    const ld two_over_pi = 2.0L / std::numbers::pi_v<ld>;
    return {static_cast<double>(j), static_cast<double>(two_over_pi * (log_part * j - ysum))};
}

// Ascending series for J_1, Y_1.
inline SeriesPair order_one_series(double x, const SpecialFnAccuracy& acc) {
    using ld = long double;
    const ld q = -0.25L * x * x;
    ld term = 0.5L * x;  // k = 0: (x/2) / (0! 1!)
    ld j = term;
    ld h_k = 0.0L;
    ld h_k1 = 1.0L;
    ld ysum = (h_k + h_k1) * term;
    for (int k = 1; k < acc.max_terms; ++k) {
        term *= q / (static_cast<ld>(k) * (k + 1));
        h_k += 1.0L / k;
        h_k1 += 1.0L / (k + 1);
        j += term;
        ysum += (h_k + h_k1) * term;
        if (std::abs(term) * (1.0L + h_k1) < 1e-21L * (1.0L + std::abs(j)) && k > x) break;
    }
    const ld pi = std::numbers::pi_v<ld>;
    const ld log_part = std::log(0.5L * x) + static_cast<ld>(kEulerGamma);
    const ld y = 2.0L / pi * log_part * j - 2.0L / (pi * x) - ysum / pi;
    return {static_cast<double>(j), static_cast<double>(y)};
}

// Hankel asymptotic expansion of H^{(1)}_nu(x), truncated at the smallest term.
inline cplx hankel1_asymptotic(double nu, double x, const SpecialFnAccuracy& acc) {
    const double mu4 = 4.0 * nu * nu;
    cplx sum = 1.0;
    cplx ik = 1.0;
    double a = 1.0;
    double last = 1.0;
    for (int k = 1; k < acc.max_terms; ++k) {
        const double next = a * (mu4 - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * x);
        if (std::abs(next) >= last) break;
        a = next;
        last = std::abs(a);
        ik *= cplx(0.0, 1.0);
        sum += ik * a;
        if (last < 1e-17) break;
    }
    const double phase = x - 0.5 * nu * std::numbers::pi - 0.25 * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * std::polar(1.0, phase) * sum;
}

}  // namespace detail

/// H_0^{(1)}(x) = J_0(x) + i Y_0(x).
inline cplx hankel1_zero(double x, const SpecialFnAccuracy& acc = {}) {
    if (!(x > 0.0)) throw DomainError("hankel1_zero: argument must be positive");
    if (x >= kAsymptoticSwitch) return detail::hankel1_asymptotic(0.0, x, acc);
    const auto s = detail::order_zero_series(x, acc);
    return {s.j, s.y};
}

/// H_1^{(1)}(x); needed for the radial derivatives of the planar fundamental solution.
inline cplx hankel1_one(double x, const SpecialFnAccuracy& acc = {}) {
    if (!(x > 0.0)) throw DomainError("hankel1_one: argument must be positive");
    if (x >= kAsymptoticSwitch) return detail::hankel1_asymptotic(1.0, x, acc);
    const auto s = detail::order_one_series(x, acc);
    return {s.j, s.y};
}

/// k-th positive zero of J_{3/2}, i.e. the k-th positive root of tan x = x.
inline double j32_zero(int k) {
    if (k < 1) throw DomainError("j32_zero: index must be >= 1");
    // sin x / x - cos x has no poles; the k-th root lies in (k pi, (k + 1/2) pi).
    const auto g = [](double x) { return std::sin(x) / x - std::cos(x); };
    double lo = k * std::numbers::pi;
    double hi = (k + 0.5) * std::numbers::pi;
    double glo = g(lo);
    while (hi - lo > 1e-13 * hi) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0) == (glo < 0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    // g'(x) = cos x / x - sin x / x^2 + sin x
    const double dg = std::cos(x) / x - std::sin(x) / (x * x) + std::sin(x);
    if (dg != 0.0) x -= g(x) / dg;
    return x;
}

}  // namespace elasticorner::special
