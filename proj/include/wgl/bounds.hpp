#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wgl/errors.hpp"
#include "wgl/graph.hpp"
#include "wgl/params.hpp"

namespace wgl {

/// One cell edge of the level-m graph: its exact width, the ordinate gap of
/// its two endpoints, and the scaled bounds it is checked against.
struct HeightRecord {
    int level = 0;
    Word word;               // address of the cell containing the edge
    int edge_in_cell = 0;    // j in [0, nb-2]
    std::int64_t left_k = 0; // abscissa index of the left endpoint
    double width = 0.0;      // 1 / ((nb-1) nb^m), exact
    double height = 0.0;     // |y(k+1) - y(k)|
    double lower = 0.0;
    double upper = 0.0;
};

/// The two level-free constants of the oscillation bounds. The bound at
/// level m is constant * lambda^m, since l_m^(2-d_w) (nb-1)^(2-d_w) =
/// nb^(-m(2-d_w)) = lambda^m.
///
/// The sine minimum is enumerated over j = 0..nb-1 exactly as the closed form
/// prescribes; when it vanishes (possible for even nb) the sine part of the
/// lower constant degenerates and `lower_sine_vacuous` is set.
struct BoundConstants {
    double lower = 0.0;
    double upper = 0.0;
    double sine_min = 0.0;
    bool lower_sine_vacuous = false;
};

inline BoundConstants bound_constants(const FractalParams& p) {
    p.validate();
    const double lam = p.lambda;
    const double nb = static_cast<double>(p.nb);
    const double pi = two_pi / 2.0;
    BoundConstants c;
    double sine_min = std::numeric_limits<double>::infinity();
    for (int j = 0; j < p.nb; ++j)
        sine_min = std::min(sine_min, std::abs(std::sin(pi * (2 * j + 1) / (nb - 1.0))));
    c.sine_min = sine_min;
    c.lower_sine_vacuous = sine_min < 1e-15;
    const double sine_part = 2.0 / (1.0 - lam) * std::sin(pi / (nb - 1.0)) * sine_min;
    const double correction = two_pi / (nb * (nb - 1.0)) / (lam * nb - 1.0);
    c.lower = sine_part - correction;
    if (p.nb % 2 == 0) {
        const double even_floor =
            4.0 / (nb * nb) * (1.0 - 1.0 / (nb * nb)) / (nb * nb - 1.0);
        c.lower = std::max(c.lower, even_floor);
    }
    c.upper = eta_upper_constant(p);
    return c;
}

inline Word cell_word(std::int64_t cell_index, int nb, int level) {
    Word w(static_cast<std::size_t>(level));
    for (int i = level - 1; i >= 0; --i) {
        w[static_cast<std::size_t>(i)] = static_cast<int>(cell_index % nb);
        cell_index /= nb;
    }
    return w;
}

/// lambda^m by iterated multiplication, so that scale(m+1) = lambda*scale(m)
/// holds bitwise.
inline double level_scale(double lambda, int m) {
    double s = 1.0;
    for (int i = 0; i < m; ++i) s *= lambda;
    return s;
}

/// One record per consecutive vertex pair of the level. Heights come from the
/// stored ordinates (the composition pathway); a series recomputation is the
/// cross-check used in tests.
inline std::vector<HeightRecord> oscillation_heights(const GraphLevel& g) {
    const int nb = g.params().nb;
    const BoundConstants c = bound_constants(g.params());
    const double scale = level_scale(g.params().lambda, g.level());
    std::vector<HeightRecord> out;
    out.reserve(static_cast<std::size_t>(g.edge_count()));
    for (std::int64_t t = 0; t < g.edge_count(); ++t) {
        HeightRecord r;
        r.level = g.level();
        const std::int64_t cell = t / (nb - 1);
        r.word = cell_word(cell, nb, g.level());
        r.edge_in_cell = static_cast<int>(t % (nb - 1));
        r.left_k = t;
        r.width = 1.0 / static_cast<double>(g.denominator());
        r.height = std::abs(g.ordinate(t + 1) - g.ordinate(t));
        r.lower = c.lower * scale;
        r.upper = c.upper * scale;
        out.push_back(std::move(r));
    }
    return out;
}

struct BoundsReport {
    int level = 0;
    BoundConstants constants;
    double scale = 0.0; // lambda^m
    std::int64_t record_count = 0;
    double min_height = 0.0;
    double max_height = 0.0;
    std::vector<std::int64_t> lower_violations; // edge indices
    std::vector<std::int64_t> upper_violations;
};

/// Checks every cell height against [lower * lambda^m, upper * lambda^m].
/// Violations are report entries, never exceptions.
inline BoundsReport check_bounds(const GraphLevel& g) {
    BoundsReport rep;
    rep.level = g.level();
    rep.constants = bound_constants(g.params());
    rep.scale = level_scale(g.params().lambda, g.level());
    rep.record_count = g.edge_count();
    const double lo = rep.constants.lower * rep.scale;
    const double hi = rep.constants.upper * rep.scale;
    double mn = std::numeric_limits<double>::infinity();
    double mx = 0.0;
    for (std::int64_t t = 0; t < g.edge_count(); ++t) {
        const double h = std::abs(g.ordinate(t + 1) - g.ordinate(t));
        mn = std::min(mn, h);
        mx = std::max(mx, h);
        if (h < lo) rep.lower_violations.push_back(t);
        if (h > hi) rep.upper_violations.push_back(t);
    }
    rep.min_height = mn;
    rep.max_height = mx;
    return rep;
}

/// Dense-sampling diagnostic: the oscillation of the series over one cell
/// edge, sampled at `samples` equispaced rational points (exact argument
/// reduction). Not used for pass/fail; it probes the alternative reading of
/// a cell's height as the bounding-box height of the curve piece.
inline double cell_oscillation(const GraphLevel& g, std::int64_t edge, int samples = 257,
                               double tol = 1e-10) {
    if (edge < 0 || edge >= g.edge_count())
        throw lookup_error("bounds: edge index out of range");
    if (samples < 2) throw param_error("bounds: need at least two samples");
    const std::int64_t den = g.denominator() * (samples - 1);
    double mn = std::numeric_limits<double>::infinity();
    double mx = -mn;
    for (int t = 0; t < samples; ++t) {
        const std::int64_t num = edge * (samples - 1) + t;
        const double v = weierstrass_eval_rational(g.params(), num, den, tol);
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    return mx - mn;
}

} // namespace wgl
