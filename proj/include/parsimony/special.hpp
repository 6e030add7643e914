#pragma once

// Scalar special functions used by the closed-form Dirichlet quantities and the
// fraction-to-real maps. Log-gamma and digamma use an upward shift recurrence
// into the asymptotic regime followed by a Stirling-type series; this gives at
// least 12 significant digits for arguments >= 1 without pulling in a
// special-function dependency.

#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace parsimony {

// ln Gamma(x), x > 0
inline double log_gamma(double x) {
    assert(x > 0.0);
    double shift = 0.0;
    while (x < 10.0) {
        shift -= std::log(x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // B_{2n} / (2n (2n-1) x^{2n-1})
    double series = inv *
                    (1.0 / 12.0 +
                     inv2 * (-1.0 / 360.0 +
                             inv2 * (1.0 / 1260.0 +
                                     inv2 * (-1.0 / 1680.0 +
                                             inv2 * (1.0 / 1188.0 +
                                                     inv2 * (-691.0 / 360360.0))))));
    const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
    return shift + (x - 0.5) * std::log(x) - x + half_log_2pi + series;
}

inline double log2_gamma(double x) { return log_gamma(x) / std::numbers::ln2; }

// psi(x) = d/dx ln Gamma(x), x > 0
inline double digamma(double x) {
    assert(x > 0.0);
    double shift = 0.0;
    while (x < 10.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // B_{2n} / (2n x^{2n})
    double series = inv2 *
                    (1.0 / 12.0 +
                     inv2 * (-1.0 / 120.0 +
                             inv2 * (1.0 / 252.0 +
                                     inv2 * (-1.0 / 240.0 +
                                             inv2 * (1.0 / 132.0 +
                                                     inv2 * (-691.0 / 32760.0))))));
    return shift + std::log(x) - 0.5 * inv - series;
}

// Inverse standard normal CDF. Rational initial guess (Acklam) polished by two
// Newton steps against erfc; accurate to ~1e-15 over (0, 1).
inline double probit(double p) {
    assert(p > 0.0 && p < 1.0);
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double inv_sqrt_2pi = 0.3989422804014326779;
    for (int step = 0; step < 2; ++step) {
        const double cdf = 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0);
        const double pdf = inv_sqrt_2pi * std::exp(-0.5 * x * x);
        if (pdf <= 0.0) break;
        x -= (cdf - p) / pdf;
    }
    return x;
}

// log2(sum_i 2^{x_i}) without overflow; -inf for an empty set
inline double log_sum_exp2(const std::vector<double>& xs) {
    double m = -std::numeric_limits<double>::infinity();
    for (const double x : xs) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double acc = 0.0;
    for (const double x : xs) acc += std::exp2(x - m);
    return m + std::log2(acc);
}

}  // namespace parsimony
