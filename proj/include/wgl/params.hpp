#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "wgl/errors.hpp"

namespace wgl {

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Integer power with overflow detection.
inline std::int64_t ipow(std::int64_t base, int exp) {
    if (exp < 0) throw param_error("params: negative exponent in integer power");
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > std::numeric_limits<std::int64_t>::max() / base)
            throw param_error("params: integer power overflow (level too deep)");
        r *= base;
    }
    return r;
}

/// Problem parameters: the series ratio lambda and the integer base nb.
/// Valid iff 0 < lambda < 1, nb >= 3 and lambda * nb > 1.
struct FractalParams {
    double lambda = 0.5;
    int nb = 3;

    void validate() const {
        if (!(lambda > 0.0) || !(lambda < 1.0))
            throw param_error("params: lambda must lie in (0, 1), got " + std::to_string(lambda));
        if (nb < 3)
            throw param_error("params: nb must be an integer >= 3, got " + std::to_string(nb));
        if (!(lambda * nb > 1.0))
            throw param_error("params: lambda * nb must exceed 1, got " +
                              std::to_string(lambda * nb));
    }
};

/// Scalar constants derived from FractalParams, computed once and shared.
///
/// d_w  = 2 + ln(lambda)/ln(nb), the box-dimension exponent, in (1, 2);
/// h    = nb^(d_w - 2), which equals lambda identically;
/// l_m  = 1 / ((nb - 1) nb^m), the horizontal mesh width at level m;
/// h_m  = l_m^(2 - d_w), the vertical renormalization at level m;
/// r_m  = nb^m, the resistance-type renormalization at level m.
struct DerivedConstants {
    double lambda = 0.0;
    int nb = 0;
    double d_w = 0.0;
    double two_minus_dw = 0.0;
    double h = 0.0;
    double eta_w = 0.0;

    double l_m(int m) const {
        return 1.0 / (static_cast<double>(nb - 1) * std::pow(static_cast<double>(nb), m));
    }
    double h_m(int m) const { return std::pow(l_m(m), two_minus_dw); }
    double r_m(int m) const { return std::pow(static_cast<double>(nb), m); }
};

/// Height-bound constant: the coefficient of l_m^(2-d_w) (nb-1)^(2-d_w) in the
/// upper oscillation bound. Kept verbatim, factor by factor.
inline double eta_upper_constant(const FractalParams& p) {
    const double lam = p.lambda;
    const double nb = static_cast<double>(p.nb);
    const double pi = two_pi / 2.0;
    const double first = (2.0 * nb - 1.0) * lam * (nb * nb - 1.0) /
                         ((nb - 1.0) * (nb - 1.0) * (1.0 - lam) * (lam * nb * nb - 1.0));
    const double second = 2.0 * nb / ((lam * nb * nb - 1.0) * (lam * nb * nb * nb - 1.0));
    return 2.0 * pi * pi * (first + second);
}

inline DerivedConstants derived_constants(const FractalParams& p) {
    p.validate();
    DerivedConstants d;
    d.lambda = p.lambda;
    d.nb = p.nb;
    d.d_w = 2.0 + std::log(p.lambda) / std::log(static_cast<double>(p.nb));
    d.two_minus_dw = -std::log(p.lambda) / std::log(static_cast<double>(p.nb));
    d.h = std::pow(static_cast<double>(p.nb), d.d_w - 2.0);
    d.eta_w = eta_upper_constant(p);
    if (!(d.d_w > 1.0 && d.d_w < 2.0))
        throw consistency_error("params: dimension exponent left (1, 2)");
    if (!(d.eta_w > 0.0))
        throw consistency_error("params: eta_w must be positive");
    return d;
}

/// Smallest truncation order N with lambda^(N+1)/(1-lambda) <= tol.
inline int truncation_order(double lambda, double tol) {
    if (!(tol > 0.0)) throw param_error("params: series tolerance must be positive");
    int n = 0;
    double tail = lambda; // lambda^(n+1)
    while (tail / (1.0 - lambda) > tol) {
        tail *= lambda;
        ++n;
        if (n > 100000) throw param_error("params: series tolerance unreachable");
    }
    return n;
}

/// Partial sum of sum_n lambda^n cos(2 pi nb^n x) through the certified
/// truncation order; absolute truncation error <= tol.
///
/// The cosine argument is reduced mod 1 step by step; for generic x each
/// multiplication by nb amplifies the representation error of x, so the
/// rounding error grows like (lambda*nb)^N. Prefer the rational overload
/// whenever x is a mesh point.
inline double weierstrass_eval(const FractalParams& p, double x, double tol) {
    p.validate();
    const int order = truncation_order(p.lambda, tol);
    double t = x - std::floor(x);
    double sum = 0.0;
    double coeff = 1.0;
    for (int n = 0; n <= order; ++n) {
        sum += coeff * std::cos(two_pi * t);
        coeff *= p.lambda;
        t *= p.nb;
        t -= std::floor(t);
    }
    return sum;
}

/// Same series for a rational abscissa x = num/den. The argument reduction
/// nb^n * num mod den is exact in integer arithmetic, so no error is
/// amplified across terms; total rounding stays at a few ulp.
inline double weierstrass_eval_rational(const FractalParams& p, std::int64_t num,
                                        std::int64_t den, double tol) {
    p.validate();
    if (den <= 0) throw param_error("params: rational abscissa needs a positive denominator");
    const int order = truncation_order(p.lambda, tol);
    std::int64_t k = ((num % den) + den) % den;
    if (k > std::numeric_limits<std::int64_t>::max() / p.nb)
        throw param_error("params: rational abscissa denominator too large");
    double sum = 0.0;
    double coeff = 1.0;
    const double inv_den = 1.0 / static_cast<double>(den);
    for (int n = 0; n <= order; ++n) {
        sum += coeff * std::cos(two_pi * (static_cast<double>(k) * inv_den));
        coeff *= p.lambda;
        k = (k * p.nb) % den;
    }
    return sum;
}

} // namespace wgl
