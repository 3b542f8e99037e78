#pragma once

// Self-contained f/g/h factorization of the tail-max maxPair CDF, used as an
// independent oracle against the general order evaluation. Everything is
// computed from the raw formulas here; nothing is shared with the library's
// evaluation path. Each per-shift factor is evaluated through its complement
// c = 1 - (f + g*h) so that log1p(-c) keeps the huge binomial exponents from
// amplifying rounding in the factor itself.

#include <cmath>

#include "randao/model.hpp"

namespace randao::testing {

// Pr(T < x) for the truncated geometric tail.
inline double geom_cdf_strict(double alpha, int x) { return 1.0 - std::pow(alpha, x); }

// Pr(T = x).
inline double geom_pmf(double alpha, int ell, int x) {
    if (x < 0 || x > ell) return 0.0;
    if (x == ell) return std::pow(alpha, ell);
    return (1.0 - alpha) * std::pow(alpha, x);
}

// Pr(Binom(n, alpha) <= y), coefficients by running product.
inline double binom_cdf(double alpha, int n, int y) {
    if (y < 0) return 0.0;
    if (y >= n) return 1.0;
    double cdf = 0.0;
    double coeff = 1.0;
    for (int c = 0; c <= y; ++c) {
        cdf += coeff * std::pow(alpha, c) * std::pow(1.0 - alpha, n - c);
        cdf = std::min(cdf, 1.0);
        coeff = coeff * static_cast<double>(n - c) / static_cast<double>(c + 1);
    }
    return cdf;
}

// Pr(Binom(n, alpha) > y).
inline double binom_upper(double alpha, int n, int y) {
    if (y < 0) return 1.0;
    if (y >= n) return 0.0;
    double sum = 0.0;
    // coefficient C(n, y + 1) by running product, then upward
    double coeff = 1.0;
    for (int c = 0; c <= y; ++c) {
        coeff = coeff * static_cast<double>(n - c) / static_cast<double>(c + 1);
    }
    for (int c = y + 1; c <= n; ++c) {
        sum += coeff * std::pow(alpha, c) * std::pow(1.0 - alpha, n - c);
        coeff = coeff * static_cast<double>(n - c) / static_cast<double>(c + 1);
    }
    return sum;
}

// Pr((T, C - i) below-or-equal (t', v) in the tail-max order): the f + g*h
// factorization, f = Pr(T < t'), g = Pr(T = t'), h the count CDF.
inline double tailmax_factor(const ModelParams& p, int i, int tprime, int v) {
    const double f = geom_cdf_strict(p.alpha, tprime);
    if (tprime == p.ell) {
        if (v + i < 0) return f;
        return f + geom_pmf(p.alpha, p.ell, p.ell);
    }
    return f + geom_pmf(p.alpha, p.ell, tprime) * binom_cdf(p.alpha, p.ell - tprime - 1, v + i);
}

// 1 - tailmax_factor, arranged so nothing near 1 is ever subtracted:
// 1 - (f + g*h) = alpha^t' * (alpha + (1 - alpha) * Pr(Binom > v + i)).
inline double tailmax_factor_complement(const ModelParams& p, int i, int tprime, int v) {
    if (tprime == p.ell) {
        return v + i < 0 ? std::pow(p.alpha, p.ell) : 0.0;
    }
    const double upper = binom_upper(p.alpha, p.ell - tprime - 1, v + i);
    return std::pow(p.alpha, tprime) * (p.alpha + (1.0 - p.alpha) * upper);
}

// CDF of the tail-max maxPair from state t, evaluated at observation (v, t').
inline double tailmax_maxpair_cdf(const ModelParams& p, int t, Observation obs) {
    double log_sum = 0.0;
    double coeff = 1.0;  // C(t, i) by running product, exact below 2^53
    for (int i = 0; i <= t; ++i) {
        const double c = tailmax_factor_complement(p, i, obs.tail, obs.omega);
        if (c >= 1.0) return 0.0;
        log_sum += coeff * std::log1p(-c);
        coeff = coeff * static_cast<double>(t - i) / static_cast<double>(i + 1);
    }
    return log_sum < -745.0 ? 0.0 : std::exp(log_sum);
}

}  // namespace randao::testing
