#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "wgl/bounds.hpp"
#include "wgl/graph.hpp"
#include "wgl/measure.hpp"
#include "wgl/params.hpp"
#include "wgl/spectral.hpp"

namespace wgl {

/// Shortest round-trip decimal of a binary64 value.
inline std::string num(double v) {
    char buf[40];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

/// Fixed two-decimal rendering for pixel coordinates.
inline std::string px(double v) {
    char buf[40];
    auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    return std::string(buf, r.ptr);
}

// ---------------------------------------------------------------------------
// CSV (RFC 4180: comma separated, CRLF line endings)
// ---------------------------------------------------------------------------

inline void csv_row(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    out += "\r\n";
}

inline std::string graph_csv(const GraphLevel& g) {
    std::string out;
    csv_row(out, {"k", "x", "y", "power"});
    for (std::int64_t k = 0; k < g.vertex_count(); ++k)
        csv_row(out, {std::to_string(k), num(g.abscissa(k)), num(g.ordinate(k)),
                      num(g.power(k))});
    return out;
}

inline std::string measure_csv(const MeasureTable& t, const std::vector<double>& weights) {
    std::string out;
    csv_row(out, {"kind", "index", "value"});
    for (std::size_t j = 0; j < t.polygon_measure.size(); ++j)
        csv_row(out, {"polygon", std::to_string(j), num(t.polygon_measure[j])});
    for (std::size_t i = 0; i < weights.size(); ++i)
        csv_row(out, {"weight", std::to_string(i), num(weights[i])});
    for (std::size_t k = 0; k < t.vertex_cell.size(); ++k)
        csv_row(out, {"cell", std::to_string(k), num(t.vertex_cell[k])});
    return out;
}

inline std::string spectrum_csv(const std::vector<EigenPair>& pairs, const DerivedConstants& d,
                                EigenvalueScaling scaling) {
    std::string out;
    csv_row(out, {"level", "segment", "k", "lambda_tilde", "lambda_physical", "residual"});
    std::vector<int> rank_in_segment;
    for (const EigenPair& e : pairs) {
        while (static_cast<int>(rank_in_segment.size()) <= e.segment)
            rank_in_segment.push_back(0);
        const int k = ++rank_in_segment[static_cast<std::size_t>(e.segment)];
        csv_row(out, {std::to_string(e.level), std::to_string(e.segment), std::to_string(k),
                      num(e.lambda_tilde),
                      num(physical_eigenvalue(e.lambda_tilde, e.level, d, scaling)),
                      num(e.residual)});
    }
    return out;
}

inline std::string bounds_csv(const GraphLevel& g) {
    std::string out;
    csv_row(out, {"level", "cell", "edge", "word", "width", "height", "lower", "upper", "ok"});
    const auto records = oscillation_heights(g);
    for (const HeightRecord& r : records) {
        std::string word;
        for (int digit : r.word) word += static_cast<char>('0' + digit);
        const bool ok = r.height >= r.lower && r.height <= r.upper;
        csv_row(out, {std::to_string(r.level), std::to_string(r.left_k / (g.params().nb - 1)),
                      std::to_string(r.edge_in_cell), word, num(r.width), num(r.height),
                      num(r.lower), num(r.upper), ok ? "1" : "0"});
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

/// Document schema:
/// { "params": {"lambda", "nb"}, "level": m,
///   "vertices": [{"k", "x", "y", "power"}...],
///   "edges": [[i, j]...],
///   "polygons": [{"j", "vertex_indices", "measure"?}...] }
/// Vertex order is abscissa order; numbers round-trip binary64.
inline nlohmann::json export_graph_json(const GraphLevel& g, const MeasureTable* t = nullptr) {
    nlohmann::json doc;
    doc["params"] = {{"lambda", g.params().lambda}, {"nb", g.params().nb}};
    doc["level"] = g.level();
    nlohmann::json vertices = nlohmann::json::array();
    for (std::int64_t k = 0; k < g.vertex_count(); ++k)
        vertices.push_back({{"k", k}, {"x", g.abscissa(k)}, {"y", g.ordinate(k)},
                            {"power", g.power(k)}});
    doc["vertices"] = std::move(vertices);
    nlohmann::json edges = nlohmann::json::array();
    for (std::int64_t e = 0; e < g.edge_count(); ++e)
        edges.push_back({e, e + 1});
    doc["edges"] = std::move(edges);
    nlohmann::json polys = nlohmann::json::array();
    for (std::int64_t j = 0; j < g.polygon_count(); ++j) {
        nlohmann::json pj;
        pj["j"] = j;
        pj["vertex_indices"] = g.polygon(j).vertex_indices(g.params().nb);
        if (t != nullptr) pj["measure"] = t->polygon_measure[static_cast<std::size_t>(j)];
        polys.push_back(std::move(pj));
    }
    doc["polygons"] = std::move(polys);
    return doc;
}

// ---------------------------------------------------------------------------
// SVG (static 1.1 documents; polyline per level)
// ---------------------------------------------------------------------------

struct SvgOptions {
    int width = 900;
    int height = 600;
    double margin_frac = 0.05;
    bool include_series_curve = false;
    int curve_samples = 2048;
    double tol = 1e-10;
};

namespace detail {

inline const std::vector<std::string>& svg_palette() {
    static const std::vector<std::string> colors = {
        "green", "red", "orange", "cyan", "blue", "magenta", "brown", "black"};
    return colors;
}

struct SvgFrame {
    double min_x, max_x, min_y, max_y;
    int width, height;

    double sx(double x) const { return (x - min_x) / (max_x - min_x) * width; }
    double sy(double y) const { return height - (y - min_y) / (max_y - min_y) * height; }
};

inline void expand(double& mn, double& mx, double frac) {
    const double pad = (mx - mn) * frac;
    if (pad > 0.0) {
        mn -= pad;
        mx += pad;
    } else {
        mn -= 1.0;
        mx += 1.0;
    }
}

inline std::string polyline(const SvgFrame& f, const std::vector<Point>& pts,
                            const std::string& color, const std::string& w) {
    std::string s = "  <polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + w +
                    "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) s += ' ';
        s += px(f.sx(pts[i].x)) + "," + px(f.sy(pts[i].y));
    }
    s += "\"/>\n";
    return s;
}

inline std::string svg_open(int w, int h) {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<!-- generated by wgl render -->\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(w) + "\" height=\"" + std::to_string(h) + "\" viewBox=\"0 0 " +
           std::to_string(w) + " " + std::to_string(h) + "\">\n";
}

} // namespace detail

/// Overlay of the level polylines, one stroke color per level, viewBox fitted
/// to the data with a margin. Optionally a densely sampled series curve on
/// top.
inline std::string render_levels_svg(const std::vector<GraphLevel>& levels,
                                     const SvgOptions& opts = {}) {
    if (levels.empty()) throw param_error("render: no levels to draw");
    double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
    for (const GraphLevel& g : levels) {
        for (std::int64_t k = 0; k < g.vertex_count(); ++k) {
            min_x = std::min(min_x, g.abscissa(k));
            max_x = std::max(max_x, g.abscissa(k));
            min_y = std::min(min_y, g.ordinate(k));
            max_y = std::max(max_y, g.ordinate(k));
        }
    }
    detail::expand(min_x, max_x, opts.margin_frac);
    detail::expand(min_y, max_y, opts.margin_frac);
    const detail::SvgFrame f{min_x, max_x, min_y, max_y, opts.width, opts.height};

    std::string out = detail::svg_open(opts.width, opts.height);
    const auto& palette = detail::svg_palette();
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const GraphLevel& g = levels[i];
        std::vector<Point> pts;
        pts.reserve(static_cast<std::size_t>(g.vertex_count()));
        for (std::int64_t k = 0; k < g.vertex_count(); ++k)
            pts.push_back({g.abscissa(k), g.ordinate(k)});
        out += detail::polyline(f, pts, palette[i % palette.size()], "1.5");
    }
    if (opts.include_series_curve) {
        std::vector<Point> pts;
        pts.reserve(static_cast<std::size_t>(opts.curve_samples) + 1);
        const FractalParams& p = levels.front().params();
        for (int i = 0; i <= opts.curve_samples; ++i) {
            const double y = weierstrass_eval_rational(p, i, opts.curve_samples, opts.tol);
            pts.push_back({static_cast<double>(i) / opts.curve_samples, y});
        }
        out += detail::polyline(f, pts, "cyan", "0.8");
    }
    out += "</svg>\n";
    return out;
}

/// Value-versus-abscissa plot of one vertex function (eigenfunctions,
/// splines), with a zero axis for reference.
inline std::string render_function_svg(const GraphLevel& g, const VertexFunction& u,
                                       const SvgOptions& opts = {}) {
    check_same_shape(g, u, "render");
    double min_v = 0.0, max_v = 0.0;
    for (double v : u.values) {
        min_v = std::min(min_v, v);
        max_v = std::max(max_v, v);
    }
    double min_x = 0.0, max_x = 1.0;
    detail::expand(min_x, max_x, opts.margin_frac);
    detail::expand(min_v, max_v, opts.margin_frac);
    const detail::SvgFrame f{min_x, max_x, min_v, max_v, opts.width, opts.height};

    std::string out = detail::svg_open(opts.width, opts.height);
    out += detail::polyline(f, {{0.0, 0.0}, {1.0, 0.0}}, "gray", "0.5");
    std::vector<Point> pts;
    pts.reserve(u.values.size());
    for (std::int64_t k = 0; k < g.vertex_count(); ++k)
        pts.push_back({g.abscissa(k), u.values[static_cast<std::size_t>(k)]});
    out += detail::polyline(f, pts, "blue", "1.5");
    out += "</svg>\n";
    return out;
}

} // namespace wgl
