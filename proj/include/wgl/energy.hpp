#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wgl/errors.hpp"
#include "wgl/graph.hpp"
#include "wgl/measure.hpp"
#include "wgl/params.hpp"

namespace wgl {

/// Three normalizations of the edge-increment form:
///   raw          sum of increment products / h_m^2
///   renormalized nb^m times raw
///   measured     renormalized with each edge weighted by the containing
///                cell's measure over nb
///
/// h_m^2 in the denominator is the canonical convention for every mode.
/// Only graph-increment energies are provided; no metric (quasi-distance)
/// energy exists here, since no admissible exponent for the euclidean
/// distance is available on this curve.
enum class EnergyMode { raw, renormalized, measured };

/// Bilinear edge-increment energy of a pair of vertex functions.
/// Symmetric, positive semidefinite, zero exactly on constants.
inline double energy(const GraphLevel& g, const VertexFunction& u, const VertexFunction& v,
                     EnergyMode mode = EnergyMode::raw, const MeasureTable* measures = nullptr) {
    check_same_shape(g, u, "energy");
    check_same_shape(g, v, "energy");
    const DerivedConstants d = derived_constants(g.params());
    const double hm = d.h_m(g.level());
    const double inv_h2 = 1.0 / (hm * hm);
    const int nb = g.params().nb;

    if (mode == EnergyMode::measured) {
        if (measures == nullptr)
            throw param_error("energy: measured mode requires a measure table");
        if (measures->level != g.level())
            throw shape_error("energy: measure table level mismatch");
    }

    double acc = 0.0;
    for (std::int64_t t = 0; t < g.edge_count(); ++t) {
        const std::size_t a = static_cast<std::size_t>(t);
        const double du = u.values[a] - u.values[a + 1];
        const double dv = v.values[a] - v.values[a + 1];
        double term = du * dv;
        if (mode == EnergyMode::measured) {
            const std::int64_t j = g.polygon_of_edge(t);
            term *= measures->polygon_measure[static_cast<std::size_t>(j)] / nb;
        }
        acc += term;
    }
    acc *= inv_h2;
    if (mode != EnergyMode::raw) acc *= d.r_m(g.level());
    return acc;
}

/// Unit clamp u* = min(max(u, 0), 1). Idempotent; never increases the energy.
inline VertexFunction markov_truncate(const VertexFunction& u) {
    VertexFunction out = u;
    for (double& v : out.values) v = std::min(std::max(v, 0.0), 1.0);
    return out;
}

namespace detail {

/// Dirichlet second-difference system on n interior points of a uniform path
/// with pinned end values: 2 w_i - w_{i-1} - w_{i+1} = 0. Solved by the
/// Thomas algorithm; the minimizer of the edge-increment energy on the
/// refined segment.
inline void fill_segment_minimizer(double left, double right, int n, double* out) {
    if (n <= 0) return;
    std::vector<double> c(static_cast<std::size_t>(n));
    std::vector<double> d(static_cast<std::size_t>(n));
    double beta = 2.0;
    c[0] = -1.0 / beta;
    d[0] = left / beta;
    for (int i = 1; i < n; ++i) {
        beta = 2.0 + c[static_cast<std::size_t>(i - 1)];
        c[static_cast<std::size_t>(i)] = -1.0 / beta;
        const double rhs = (i == n - 1) ? right : 0.0;
        d[static_cast<std::size_t>(i)] =
            (rhs + d[static_cast<std::size_t>(i - 1)]) / beta;
    }
    out[n - 1] = d[static_cast<std::size_t>(n - 1)];
    for (int i = n - 2; i >= 0; --i)
        out[i] = d[static_cast<std::size_t>(i)] -
                 c[static_cast<std::size_t>(i)] * out[i + 1];
}

} // namespace detail

/// Minimum-energy extension of a level-(m-1) function to level m. Inherited
/// vertices keep their values exactly (old k maps to nb*k); each refined edge
/// contributes nb-1 new values from the per-segment system above.
inline VertexFunction harmonic_extension(const FractalParams& p, const VertexFunction& u) {
    p.validate();
    const int m = u.level + 1;
    const std::int64_t coarse_n = (p.nb - 1) * ipow(p.nb, u.level) + 1;
    if (static_cast<std::int64_t>(u.values.size()) != coarse_n)
        throw shape_error("energy: vertex function does not match its declared level");
    const std::int64_t fine_n = (coarse_n - 1) * p.nb + 1;
    VertexFunction out{m, std::vector<double>(static_cast<std::size_t>(fine_n))};
    for (std::int64_t k = 0; k + 1 < coarse_n; ++k) {
        const double a = u.values[static_cast<std::size_t>(k)];
        const double b = u.values[static_cast<std::size_t>(k + 1)];
        double* base = out.values.data() + k * p.nb;
        base[0] = a;
        detail::fill_segment_minimizer(a, b, p.nb - 1, base + 1);
    }
    out.values.back() = u.values.back();
    return out;
}

/// Spline basis function of X in V_m, realized at level target >= m: the
/// indicator of X at level m, extended harmonically level by level.
inline VertexFunction spline_basis(const FractalParams& p, int m, std::int64_t k, int target) {
    p.validate();
    if (m < 0) throw param_error("energy: spline base level must be >= 0");
    if (target < m) throw param_error("energy: spline target level below base level");
    const std::int64_t n = (p.nb - 1) * ipow(p.nb, m) + 1;
    if (k < 0 || k >= n)
        throw lookup_error("energy: spline center " + std::to_string(k) +
                           " is not a vertex of level " + std::to_string(m));
    VertexFunction u{m, std::vector<double>(static_cast<std::size_t>(n), 0.0)};
    u.values[static_cast<std::size_t>(k)] = 1.0;
    for (int lev = m; lev < target; ++lev) u = harmonic_extension(p, u);
    return u;
}

} // namespace wgl
