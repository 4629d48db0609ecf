#pragma once

// Small least-squares helpers: limits under a known correction ladder,
// log-log slopes, and variable-projection fits of decay rates.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include "errors.hpp"
#include "jet.hpp"

namespace elasticorner {

using CMatX = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using CVecX = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;

struct LinearFit {
    CVecX coefficients;
    double residual_norm = 0.0;  ///< weighted
};

/// Minimizes sum_i |w_i (A c - b)_i|^2.
inline LinearFit weighted_least_squares(const CMatX& A, const CVecX& b, const Eigen::VectorXd& w) {
    if (A.rows() != b.size() || A.rows() != w.size()) throw DomainError("weighted_least_squares: size mismatch");
    const CMatX Aw = w.cast<cplx>().asDiagonal() * A;
    const CVecX bw = w.cast<cplx>().asDiagonal() * b;
    LinearFit out;
    out.coefficients = Aw.colPivHouseholderQr().solve(bw);
    out.residual_norm = (Aw * out.coefficients - bw).norm();
    return out;
}

struct LimitFit {
    cplx limit;
    CVecX coefficients;  ///< c_k of sum c_k t^k, t = s^{-2 alpha}
    double residual = 0.0;
};

/// Fits values(s) ~ sum_{k <= degree} c_k s^{-2 alpha k} and returns c_0.
/// sigma holds per-sample error scales (uniform when empty).
inline LimitFit extrapolate_limit(const std::vector<double>& s, const std::vector<cplx>& values, double alpha,
                                  const std::vector<double>& sigma = {}, int degree = 1) {
    const int n = static_cast<int>(s.size());
    if (n < 2 || static_cast<int>(values.size()) != n) throw DomainError("extrapolate_limit: need >= 2 samples");
    degree = std::min(degree, n - 1);
    CMatX A(n, degree + 1);
    CVecX b(n);
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) {
        const double t = std::pow(s[i], -2.0 * alpha);
        for (int k = 0; k <= degree; ++k) A(i, k) = std::pow(t, k);
        b(i) = values[i];
        w(i) = sigma.empty() ? 1.0 : 1.0 / sigma[i];
    }
    const LinearFit f = weighted_least_squares(A, b, w);
    return {f.coefficients(0), f.coefficients, f.residual_norm};
}

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
};

/// Weighted linear regression of y on x.
inline SlopeFit linear_regression(const std::vector<double>& x, const std::vector<double>& y,
                                  const std::vector<double>& weights = {}) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw DomainError("linear_regression: need >= 2 samples");
    double sw = 0, sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        sw += w;
        sx += w * x[i];
        sy += w * y[i];
    }
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        sxx += w * (x[i] - mx) * (x[i] - mx);
        sxy += w * (x[i] - mx) * (y[i] - my);
    }
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (n > 2) {
        double ssr = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = weights.empty() ? 1.0 : weights[i];
            const double r = y[i] - f.intercept - f.slope * x[i];
            ssr += w * r * r;
        }
        f.stderr_slope = std::sqrt(ssr / (n - 2) / sxx);
    }
    return f;
}

/// Slope of log|y| against log x.
inline SlopeFit loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                             const std::vector<double>& weights = {}) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(std::abs(y[i])));
    }
    return linear_regression(lx, ly, weights);
}

/// Result of a separable fit y(x) ~ sum_j a_j basis_j(x; p) over one nonlinear parameter p.
struct ProjectionFit {
    double parameter = 0.0;
    CVecX amplitudes;
    double relative_residual = 0.0;
};

/// Variable projection: for each trial p the amplitudes solve the weighted
/// complex least-squares problem design(p) c = b, and p minimizes the weighted
/// residual on [lo, hi] (coarse scan, then Brent).
inline ProjectionFit variable_projection(const std::function<CMatX(double)>& design, const CVecX& b,
                                         const Eigen::VectorXd& w, double lo, double hi) {
    if (b.size() == 0 || w.size() != b.size()) throw DomainError("variable_projection: bad samples");
    const double bnorm = (w.cast<cplx>().asDiagonal() * b).norm();
    auto objective = [&](double p) { return weighted_least_squares(design(p), b, w).residual_norm; };
    const int scan = 64;
    double best = lo, best_val = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= scan; ++k) {
        const double p = lo + (hi - lo) * k / scan;
        const double v = objective(p);
        if (v < best_val) {
            best_val = v;
            best = p;
        }
    }
    const double step = (hi - lo) / scan;
    const auto r =
        boost::math::tools::brent_find_minima(objective, std::max(lo, best - step), std::min(hi, best + step), 52);
    ProjectionFit out;
    out.parameter = r.first;
    const LinearFit f = weighted_least_squares(design(r.first), b, w);
    out.amplitudes = f.coefficients;
    out.relative_residual = bnorm > 0 ? f.residual_norm / bnorm : 0.0;
    return out;
}

/// Scalar-sample form: y(x_i) ~ sum_k a_k basis(x_i, p)_k.
inline ProjectionFit variable_projection_fit(
    const std::vector<double>& x, const std::vector<cplx>& y, const std::vector<double>& weights,
    const std::function<std::vector<cplx>(double x, double p)>& basis, double lo, double hi) {
    const int n = static_cast<int>(x.size());
    if (n == 0 || static_cast<int>(y.size()) != n) throw DomainError("variable_projection_fit: bad samples");
    Eigen::VectorXd w(n);
    CVecX b(n);
    for (int i = 0; i < n; ++i) {
        w(i) = weights.empty() ? 1.0 : weights[i];
        b(i) = y[i];
    }
    auto design = [&](double p) {
        const int m = static_cast<int>(basis(x[0], p).size());
        CMatX A(n, m);
        for (int i = 0; i < n; ++i) {
            const auto row = basis(x[i], p);
            for (int k = 0; k < m; ++k) A(i, k) = row[k];
        }
        return A;
    };
    return variable_projection(design, b, w, lo, hi);
}

}  // namespace elasticorner
