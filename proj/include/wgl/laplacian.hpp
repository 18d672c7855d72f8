#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wgl/errors.hpp"
#include "wgl/graph.hpp"
#include "wgl/measure.hpp"
#include "wgl/params.hpp"

namespace wgl {

/// Second-difference operator of order m, scaled by 1/h_m^2, acting on the
/// interior (every vertex except the nb fixed points, which pin Dirichlet
/// data). The path decouples into nb-1 independent segments of nb^m - 1
/// interior points each. Symmetric and negative semidefinite on interior
/// data.
struct DiscreteLaplacian {
    FractalParams params;
    int level = 1;
    double inv_h2 = 0.0;        // 1/h_m^2
    std::int64_t segment = 0;   // boundary spacing nb^m
    std::int64_t size = 0;      // vertex count at this level

    std::vector<std::int64_t> interior_indices() const {
        std::vector<std::int64_t> out;
        out.reserve(static_cast<std::size_t>(size - params.nb));
        for (std::int64_t k = 1; k < size - 1; ++k)
            if (k % segment != 0) out.push_back(k);
        return out;
    }

    /// Full-size image with zeros on the boundary set.
    std::vector<double> apply(const VertexFunction& u) const {
        if (u.level != level || static_cast<std::int64_t>(u.values.size()) != size)
            throw shape_error("laplacian: vertex function does not match the operator level");
        std::vector<double> out(u.values.size(), 0.0);
        for (std::int64_t k = 1; k < size - 1; ++k) {
            if (k % segment == 0) continue;
            const std::size_t i = static_cast<std::size_t>(k);
            out[i] = (u.values[i - 1] + u.values[i + 1] - 2.0 * u.values[i]) * inv_h2;
        }
        return out;
    }
};

inline DiscreteLaplacian assemble_laplacian(const GraphLevel& g) {
    if (g.level() < 1) throw param_error("laplacian: level 0 has no interior");
    const DerivedConstants d = derived_constants(g.params());
    const double hm = d.h_m(g.level());
    return DiscreteLaplacian{g.params(), g.level(), 1.0 / (hm * hm),
                             ipow(g.params().nb, g.level()), g.vertex_count()};
}

inline std::vector<double> apply_laplacian(const GraphLevel& g, const VertexFunction& u) {
    check_same_shape(g, u, "laplacian");
    return assemble_laplacian(g).apply(u);
}

inline double laplacian_at(const GraphLevel& g, const VertexFunction& u, std::int64_t k) {
    if (g.level() < 1) throw param_error("laplacian: level 0 has no interior");
    check_same_shape(g, u, "laplacian");
    if (g.is_boundary(k))
        throw param_error("laplacian: vertex " + std::to_string(k) +
                          " carries Dirichlet data, not an interior stencil");
    const DerivedConstants d = derived_constants(g.params());
    const double hm = d.h_m(g.level());
    const std::size_t i = static_cast<std::size_t>(k);
    return (u.values[i - 1] + u.values[i + 1] - 2.0 * u.values[i]) / (hm * hm);
}

using VertexProvider = std::function<double(const Vertex&)>;

/// The renormalized sequence f_m(X) = nb^m (Delta_m u)(X) for a closed-form
/// u, evaluated on every level in [m_from, m_to]. X is given at its base
/// level; nested levels locate it at k * nb^(m - base). No convergence is
/// asserted; callers inspect the sequence.
inline std::vector<double> renormalized_laplacian_seq(const FractalParams& p,
                                                      const VertexProvider& u, int base_level,
                                                      std::int64_t k, int m_from, int m_to,
                                                      const BuildOptions& opts = {}) {
    p.validate();
    if (m_from < 1 || m_from > m_to)
        throw param_error("laplacian: bad level range");
    if (m_from < base_level)
        throw param_error("laplacian: sequence must start at or above the base level");
    GraphLevel base = build_level(p, base_level, opts);
    if (base.is_boundary(k))
        throw param_error("laplacian: renormalized sequence is defined away from the boundary set");
    const DerivedConstants d = derived_constants(p);
    GraphLevel g = build_level(p, m_from, opts);
    std::vector<double> out;
    for (int m = m_from; m <= m_to; ++m) {
        if (m > m_from) g = refine(g, opts);
        const std::int64_t km = k * ipow(p.nb, m - base_level);
        const std::size_t i = static_cast<std::size_t>(km);
        const double hm = d.h_m(m);
        const double left = u(g.vertex(km - 1));
        const double mid = u(g.vertex(km));
        const double right = u(g.vertex(km + 1));
        out.push_back(d.r_m(m) * (left + right - 2.0 * mid) / (hm * hm));
        (void)i;
    }
    return out;
}

/// Per-level approximants of the boundary-flux limit at X:
///   (nb^k / h_k^2) sum_{Y ~ X} (u(X) - u(Y)) A_k(X) / nb.
/// The report always carries the whole sequence; `converged` is set when the
/// last three entries agree within the caller's tolerance.
struct NormalDerivativeReport {
    int base_level = 0;
    std::int64_t k = 0;
    std::vector<int> levels;
    std::vector<double> approximants;
    bool converged = false;
    double value = 0.0;
};

inline NormalDerivativeReport normal_derivative(const FractalParams& p, const VertexProvider& u,
                                                int base_level, std::int64_t k, int k_from,
                                                int k_to, double tol,
                                                const BuildOptions& opts = {}) {
    p.validate();
    if (k_from < base_level || k_from > k_to)
        throw param_error("laplacian: bad level range for the normal derivative");
    NormalDerivativeReport rep;
    rep.base_level = base_level;
    rep.k = k;
    const DerivedConstants d = derived_constants(p);
    GraphLevel g = build_level(p, k_from, opts);
    for (int lev = k_from; lev <= k_to; ++lev) {
        if (lev > k_from) g = refine(g, opts);
        MeasureTable t = measure_table(g);
        const std::int64_t kk = k * ipow(p.nb, lev - base_level);
        const double ux = u(g.vertex(kk));
        double s = 0.0;
        for (std::int64_t nb_k : g.neighbors(kk)) s += ux - u(g.vertex(nb_k));
        const double hk = d.h_m(lev);
        const double am = t.vertex_cell[static_cast<std::size_t>(kk)];
        rep.levels.push_back(lev);
        rep.approximants.push_back(d.r_m(lev) / (hk * hk) * s * am / p.nb);
    }
    const std::size_t n = rep.approximants.size();
    if (n >= 3) {
        const double a = rep.approximants[n - 3];
        const double b = rep.approximants[n - 2];
        const double c = rep.approximants[n - 1];
        const double scale = 1.0 + std::abs(c);
        rep.converged = std::abs(a - b) <= tol * scale && std::abs(b - c) <= tol * scale;
    }
    rep.value = rep.approximants.empty() ? 0.0 : rep.approximants.back();
    return rep;
}

/// The three pieces of the level-m summation-by-parts identity
///   E_m(u, v) = - sum_{interior} v nb^m Delta_m u + boundary flux,
/// which holds as exact algebra; `residual` is pure rounding.
/// `boundary_raw` is the flux as it appears in the identity;
/// `boundary_weighted` additionally carries the A_m/nb quadrature weight used
/// by the normal-derivative limit (requires a measure table).
struct GaussGreenTerms {
    double energy = 0.0;        // renormalized energy E_m(u, v)
    double interior = 0.0;      // sum over interior of v * nb^m Delta_m u
    double boundary_raw = 0.0;  // (nb^m/h_m^2) sum_{X in V_0} v(X) sum (u(X)-u(Y))
    double boundary_weighted = 0.0;
    double residual = 0.0;      // |energy + interior - boundary_raw|
};

inline GaussGreenTerms gauss_green(const GraphLevel& g, const VertexFunction& u,
                                   const VertexFunction& v,
                                   const MeasureTable* measures = nullptr) {
    if (g.level() < 1) throw param_error("laplacian: level 0 has no interior");
    check_same_shape(g, u, "laplacian");
    check_same_shape(g, v, "laplacian");
    const DerivedConstants d = derived_constants(g.params());
    const double hm = d.h_m(g.level());
    const double scale = d.r_m(g.level()) / (hm * hm);
    const std::int64_t seg = ipow(g.params().nb, g.level());

    GaussGreenTerms out;
    double e = 0.0;
    for (std::int64_t t = 0; t < g.edge_count(); ++t) {
        const std::size_t a = static_cast<std::size_t>(t);
        e += (u.values[a] - u.values[a + 1]) * (v.values[a] - v.values[a + 1]);
    }
    out.energy = scale * e;

    double interior = 0.0;
    for (std::int64_t k = 1; k < g.vertex_count() - 1; ++k) {
        if (k % seg == 0) continue;
        const std::size_t i = static_cast<std::size_t>(k);
        interior += v.values[i] *
                    (u.values[i - 1] + u.values[i + 1] - 2.0 * u.values[i]);
    }
    out.interior = scale * interior;

    double braw = 0.0;
    double bweighted = 0.0;
    for (int i = 0; i < g.params().nb; ++i) {
        const std::int64_t k = static_cast<std::int64_t>(i) * seg;
        const std::size_t ik = static_cast<std::size_t>(k);
        double flux = 0.0;
        for (std::int64_t nb_k : g.neighbors(k))
            flux += u.values[ik] - u.values[static_cast<std::size_t>(nb_k)];
        braw += v.values[ik] * flux;
        if (measures != nullptr)
            bweighted += v.values[ik] * flux *
                         measures->vertex_cell[ik] / g.params().nb;
    }
    out.boundary_raw = scale * braw;
    out.boundary_weighted = measures ? scale * bweighted
                                     : std::numeric_limits<double>::quiet_NaN();
    out.residual = std::abs(out.energy + out.interior - out.boundary_raw);
    return out;
}

inline double gauss_green_residual(const GraphLevel& g, const VertexFunction& u,
                                   const VertexFunction& v) {
    return gauss_green(g, u, v).residual;
}

} // namespace wgl
