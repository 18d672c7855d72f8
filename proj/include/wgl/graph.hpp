#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wgl/errors.hpp"
#include "wgl/ifs.hpp"
#include "wgl/params.hpp"

namespace wgl {

/// A vertex of the level-m graph. Identity is the exact integer pair
/// (level, k); the abscissa is x = k / ((nb-1) nb^m). Floating point never
/// decides identity.
struct Vertex {
    int level = 0;
    std::int64_t k = 0;
    double x = 0.0;
    double y = 0.0;
};

/// One of the nb^m cells: nb consecutive vertices starting at `first`.
/// Consecutive cells share exactly one vertex.
struct Polygon {
    int level = 0;
    std::int64_t index = 0; // j in [0, nb^m - 1]
    std::int64_t first = 0; // k of the leftmost vertex, = index * (nb - 1)

    std::vector<std::int64_t> vertex_indices(int nb) const {
        std::vector<std::int64_t> v(static_cast<std::size_t>(nb));
        for (int i = 0; i < nb; ++i) v[static_cast<std::size_t>(i)] = first + i;
        return v;
    }
};

struct BuildOptions {
    int max_level = 12;
    double junction_tol = 1e-10;
};

/// Level-m approximation graph: an open path of (nb-1) nb^m + 1 vertices
/// ordered by abscissa. Every integer abscissa slot k in
/// [0, (nb-1) nb^m] is occupied, so k doubles as the ordinal position.
/// Immutable once built; cheap accessors derive structure (cells, powers,
/// boundary set) from k alone.
class GraphLevel {
public:
    GraphLevel(FractalParams params, int level, std::vector<double> ordinates)
        : params_(params), level_(level), ys_(std::move(ordinates)) {
        params_.validate();
        if (level_ < 0) throw param_error("graph: negative level");
        const std::int64_t want = (params_.nb - 1) * ipow(params_.nb, level_) + 1;
        if (static_cast<std::int64_t>(ys_.size()) != want)
            throw shape_error("graph: ordinate list has " + std::to_string(ys_.size()) +
                              " entries, level " + std::to_string(level_) + " needs " +
                              std::to_string(want));
    }

    const FractalParams& params() const { return params_; }
    int level() const { return level_; }

    std::int64_t denominator() const { return (params_.nb - 1) * ipow(params_.nb, level_); }
    std::int64_t vertex_count() const { return static_cast<std::int64_t>(ys_.size()); }
    std::int64_t edge_count() const { return vertex_count() - 1; }
    std::int64_t polygon_count() const { return ipow(params_.nb, level_); }
    std::int64_t junction_count() const { return polygon_count() - 1; }

    double abscissa(std::int64_t k) const { return static_cast<double>(k) / static_cast<double>(denominator()); }
    double ordinate(std::int64_t k) const { return ys_[checked(k)]; }
    const std::vector<double>& ordinates() const { return ys_; }

    Vertex vertex(std::int64_t k) const { return {level_, k, abscissa(k), ys_[checked(k)]}; }

    /// Junctions are the vertices shared by two consecutive cells:
    /// k = j (nb - 1) with 0 < j < nb^m.
    bool is_junction(std::int64_t k) const {
        checked(k);
        return k > 0 && k < denominator() && k % (params_.nb - 1) == 0;
    }

    /// p(X): 1/2 on junctions, 1 elsewhere.
    double power(std::int64_t k) const { return is_junction(k) ? 0.5 : 1.0; }

    /// The nb fixed points sit at k = i * nb^m; they carry the boundary
    /// (Dirichlet) data for the Laplacian.
    bool is_boundary(std::int64_t k) const {
        checked(k);
        return k % ipow(params_.nb, level_) == 0;
    }

    std::int64_t interior_count() const {
        return vertex_count() - params_.nb;
    }

    Polygon polygon(std::int64_t j) const {
        if (j < 0 || j >= polygon_count())
            throw lookup_error("graph: polygon index " + std::to_string(j) + " out of range");
        return {level_, j, j * (params_.nb - 1)};
    }

    /// The unique cell containing the edge (t, t+1).
    std::int64_t polygon_of_edge(std::int64_t t) const {
        if (t < 0 || t >= edge_count())
            throw lookup_error("graph: edge index " + std::to_string(t) + " out of range");
        return t / (params_.nb - 1);
    }

    /// Path adjacency: interior vertices have two neighbours, the two
    /// extremal vertices one. The wrap-around convention is deliberately not
    /// used; both extremal points belong to the boundary set anyway.
    std::vector<std::int64_t> neighbors(std::int64_t k) const {
        checked(k);
        std::vector<std::int64_t> out;
        if (k > 0) out.push_back(k - 1);
        if (k < denominator()) out.push_back(k + 1);
        return out;
    }

private:
    std::size_t checked(std::int64_t k) const {
        if (k < 0 || k >= static_cast<std::int64_t>(ys_.size()))
            throw lookup_error("graph: vertex index " + std::to_string(k) +
                               " not in level " + std::to_string(level_));
        return static_cast<std::size_t>(k);
    }

    FractalParams params_;
    int level_;
    std::vector<double> ys_;
};

/// One refinement step: apply every contraction to the previous level and
/// merge duplicates by exact abscissa index. The nb-1 strip boundaries are
/// written twice; their ordinates must agree to junction_tol, otherwise the
/// contraction formulas are inconsistent and we refuse to continue.
inline GraphLevel refine(const GraphLevel& prev, const BuildOptions& opts = {}) {
    const FractalParams& p = prev.params();
    const int m = prev.level() + 1;
    if (m > opts.max_level)
        throw param_error("graph: level " + std::to_string(m) + " exceeds the configured cap " +
                          std::to_string(opts.max_level));
    const std::int64_t q = prev.denominator();
    const std::int64_t big_q = q * p.nb;
    std::vector<double> ys(static_cast<std::size_t>(big_q) + 1);
    const double inv_big_q = 1.0 / static_cast<double>(big_q);
    for (int i = 0; i < p.nb; ++i) {
        const std::int64_t base = static_cast<std::int64_t>(i) * q;
        for (std::int64_t kp = 0; kp <= q; ++kp) {
            const std::int64_t k = base + kp;
            const double x = static_cast<double>(k) * inv_big_q;
            const double y = p.lambda * prev.ordinate(kp) + std::cos(two_pi * x);
            if (i > 0 && kp == 0) {
                const double seen = ys[static_cast<std::size_t>(k)];
                if (!(std::abs(seen - y) <= opts.junction_tol))
                    throw consistency_error(
                        "graph: junction ordinate mismatch at level " + std::to_string(m) +
                        ", k = " + std::to_string(k) + " (" + std::to_string(seen) + " vs " +
                        std::to_string(y) + ")");
            } else {
                ys[static_cast<std::size_t>(k)] = y;
            }
        }
    }
    return GraphLevel(p, m, std::move(ys));
}

/// Build the level-m graph from scratch. Level 0 holds the nb fixed points;
/// deeper levels are produced by repeated refinement.
inline GraphLevel build_level(const FractalParams& p, int m, const BuildOptions& opts = {}) {
    p.validate();
    if (m < 0) throw param_error("graph: negative level");
    if (m > opts.max_level)
        throw param_error("graph: level " + std::to_string(m) + " exceeds the configured cap " +
                          std::to_string(opts.max_level));
    std::vector<double> ys(static_cast<std::size_t>(p.nb));
    for (int i = 0; i < p.nb; ++i) ys[static_cast<std::size_t>(i)] = fixed_point(p, i).y;
    GraphLevel g(p, 0, std::move(ys));
    for (int lev = 0; lev < m; ++lev) g = refine(g, opts);
    return g;
}

/// The forced cell decomposition: nb^m cells of nb consecutive vertices.
inline std::vector<Polygon> polygonize(const GraphLevel& g) {
    std::vector<Polygon> out;
    out.reserve(static_cast<std::size_t>(g.polygon_count()));
    for (std::int64_t j = 0; j < g.polygon_count(); ++j) out.push_back(g.polygon(j));
    return out;
}

/// Real values attached to the vertices of one level, ordered by abscissa.
struct VertexFunction {
    int level = 0;
    std::vector<double> values;
};

inline void check_same_shape(const GraphLevel& g, const VertexFunction& u, const char* who) {
    if (u.level != g.level() ||
        static_cast<std::int64_t>(u.values.size()) != g.vertex_count())
        throw shape_error(std::string(who) + ": vertex function does not match level " +
                          std::to_string(g.level()));
}

/// Restriction of a closed-form function to the vertices of a level.
template <typename F>
VertexFunction restrict_to_level(const GraphLevel& g, F&& f) {
    VertexFunction u{g.level(), std::vector<double>(static_cast<std::size_t>(g.vertex_count()))};
    for (std::int64_t k = 0; k < g.vertex_count(); ++k)
        u.values[static_cast<std::size_t>(k)] = f(g.vertex(k));
    return u;
}

} // namespace wgl
