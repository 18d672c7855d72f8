#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wgl/errors.hpp"
#include "wgl/graph.hpp"

namespace wgl {

/// Raw shoelace area of the level-0 cell spanned by the fixed points.
inline double level0_raw_area(const FractalParams& p) {
    p.validate();
    double s = 0.0;
    for (int i = 0; i < p.nb; ++i) {
        const Point a = fixed_point(p, i);
        const Point b = fixed_point(p, (i + 1) % p.nb);
        s += a.x * b.y - b.x * a.y;
    }
    return std::abs(s) / 2.0;
}

/// Normalized cell areas mu(P_{m,j}): shoelace area of each cell divided by
/// the level-0 area, so the level-0 table is exactly {1}.
inline std::vector<double> polygon_measures(const GraphLevel& g) {
    const int nb = g.params().nb;
    const double ref = level0_raw_area(g.params());
    if (!(ref > 0.0)) throw geometry_error("measure: level-0 cell has zero area");
    std::vector<double> out(static_cast<std::size_t>(g.polygon_count()));
    for (std::int64_t j = 0; j < g.polygon_count(); ++j) {
        const std::int64_t first = j * (nb - 1);
        double s = 0.0;
        for (int i = 0; i < nb; ++i) {
            const std::int64_t ka = first + i;
            const std::int64_t kb = first + (i + 1) % nb;
            s += g.abscissa(ka) * g.ordinate(kb) - g.abscissa(kb) * g.ordinate(ka);
        }
        const double area = std::abs(s) / 2.0;
        if (!(area > 0.0))
            throw geometry_error("measure: degenerate (zero-area) cell at level " +
                                 std::to_string(g.level()) + ", index " + std::to_string(j));
        out[static_cast<std::size_t>(j)] = area / ref;
    }
    return out;
}

/// Diagnostic: does the closed cell polyline self-intersect? The cells are
/// taken to be simple; this check only reports, it never fails a build.
inline bool polygon_is_simple(const GraphLevel& g, std::int64_t j) {
    const int nb = g.params().nb;
    const std::int64_t first = g.polygon(j).first;
    struct Seg {
        double ax, ay, bx, by;
    };
    std::vector<Seg> segs;
    for (int i = 0; i < nb; ++i) {
        const std::int64_t ka = first + i;
        const std::int64_t kb = first + (i + 1) % nb;
        segs.push_back({g.abscissa(ka), g.ordinate(ka), g.abscissa(kb), g.ordinate(kb)});
    }
    auto orient = [](double ax, double ay, double bx, double by, double cx, double cy) {
        const double v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
        return (v > 0.0) - (v < 0.0);
    };
    const int n = static_cast<int>(segs.size());
    for (int a = 0; a < n; ++a) {
        for (int b = a + 2; b < n; ++b) {
            if (a == 0 && b == n - 1) continue; // shared endpoint
            const Seg& s = segs[static_cast<std::size_t>(a)];
            const Seg& t = segs[static_cast<std::size_t>(b)];
            const int o1 = orient(s.ax, s.ay, s.bx, s.by, t.ax, t.ay);
            const int o2 = orient(s.ax, s.ay, s.bx, s.by, t.bx, t.by);
            const int o3 = orient(t.ax, t.ay, t.bx, t.by, s.ax, s.ay);
            const int o4 = orient(t.ax, t.ay, t.bx, t.by, s.bx, s.by);
            if (o1 != o2 && o3 != o4) return false;
        }
    }
    return true;
}

/// Per-level measure data: cell measures, per-vertex cell measures A_m(X),
/// and (for m >= 1) the per-letter replication weights.
struct MeasureTable {
    int level = 0;
    std::vector<double> polygon_measure;
    std::vector<double> replication_weights; // empty at level 0
    std::vector<double> vertex_cell;         // A_m(X), indexed by k
    std::vector<std::int64_t> non_simple_polygons; // diagnostic, filled for m <= 3

    double total() const {
        double s = 0.0;
        for (double v : polygon_measure) s += v;
        return s;
    }
};

/// A_m(X): the measure of the cell containing X, or the mean of the two cell
/// measures when X is a junction.
inline double vertex_cell_measure(const GraphLevel& g, const std::vector<double>& poly_measure,
                                  std::int64_t k) {
    const int nb = g.params().nb;
    if (g.is_junction(k)) {
        const std::int64_t j = k / (nb - 1);
        return 0.5 * (poly_measure[static_cast<std::size_t>(j - 1)] +
                      poly_measure[static_cast<std::size_t>(j)]);
    }
    std::int64_t j = k / (nb - 1);
    if (j == g.polygon_count()) --j; // rightmost vertex
    return poly_measure[static_cast<std::size_t>(j)];
}

inline MeasureTable measure_table(const GraphLevel& g) {
    MeasureTable t;
    t.level = g.level();
    t.polygon_measure = polygon_measures(g);
    t.vertex_cell.resize(static_cast<std::size_t>(g.vertex_count()));
    for (std::int64_t k = 0; k < g.vertex_count(); ++k)
        t.vertex_cell[static_cast<std::size_t>(k)] =
            vertex_cell_measure(g, t.polygon_measure, k);
    if (g.level() <= 3) {
        for (std::int64_t j = 0; j < g.polygon_count(); ++j)
            if (!polygon_is_simple(g, j)) t.non_simple_polygons.push_back(j);
    }
    return t;
}

/// Per-letter weights mu_{m,i}: the total fine-cell measure inside strip i
/// over the total coarse measure. By construction the weights times the
/// coarse total reproduce the fine total.
inline std::vector<double> replication_weights(const MeasureTable& fine,
                                               const MeasureTable& coarse, int nb) {
    if (fine.level != coarse.level + 1)
        throw shape_error("measure: replication weights need consecutive levels");
    const double denom = coarse.total();
    const std::int64_t per_strip =
        static_cast<std::int64_t>(fine.polygon_measure.size()) / nb;
    std::vector<double> w(static_cast<std::size_t>(nb));
    for (int i = 0; i < nb; ++i) {
        double s = 0.0;
        for (std::int64_t j = i * per_strip; j < (i + 1) * per_strip; ++j)
            s += fine.polygon_measure[static_cast<std::size_t>(j)];
        w[static_cast<std::size_t>(i)] = s / denom;
    }
    return w;
}

/// Convenience: weights for level m, building both levels. m >= 1.
inline std::vector<double> replication_weights(const FractalParams& p, int m,
                                               const BuildOptions& opts = {}) {
    if (m < 1) throw param_error("measure: replication weights need level >= 1");
    GraphLevel coarse = build_level(p, m - 1, opts);
    GraphLevel fine = refine(coarse, opts);
    return replication_weights(measure_table(fine), measure_table(coarse), p.nb);
}

/// The level-m quadrature term: sum over cells j of
/// sum_{X in P_j} p(X) u(X) mu(P_j) / nb.
inline double integrate(const VertexFunction& u, const GraphLevel& g, const MeasureTable& t) {
    check_same_shape(g, u, "measure");
    if (t.level != g.level())
        throw shape_error("measure: table level does not match graph level");
    const int nb = g.params().nb;
    double acc = 0.0;
    for (std::int64_t j = 0; j < g.polygon_count(); ++j) {
        const std::int64_t first = j * (nb - 1);
        double cell = 0.0;
        for (int i = 0; i < nb; ++i) {
            const std::int64_t k = first + i;
            cell += g.power(k) * u.values[static_cast<std::size_t>(k)];
        }
        acc += cell * t.polygon_measure[static_cast<std::size_t>(j)] / nb;
    }
    return acc;
}

} // namespace wgl
