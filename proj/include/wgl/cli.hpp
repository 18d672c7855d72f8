#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wgl/bounds.hpp"
#include "wgl/energy.hpp"
#include "wgl/errors.hpp"
#include "wgl/export.hpp"
#include "wgl/graph.hpp"
#include "wgl/laplacian.hpp"
#include "wgl/measure.hpp"
#include "wgl/spectral.hpp"
#include "wgl/verify.hpp"

namespace wgl {
namespace cli {

struct RunConfig {
    double lambda = 0.5;
    int nb = 3;
    int level = 1;
    int base = 1;
    double tol = 1e-10;
    std::uint64_t seed = 12345;
    std::string format = "json"; // json | csv | svg
    std::string output;          // empty = stdout
    std::string dirichlet = "v0";
    std::string branch = "principal"; // principal | all
    std::string mode = "raw";         // raw | renormalized | measured
    std::string scaling = "laplacian"; // laplacian | decimation
    std::string input;
    double lambda_tilde = 6.0;
    int steps = 1;
    std::int64_t budget = 20000;
    int eigen_index = -1;
    bool curve = false;
    bool normal = false;
    int samples = 2048;

    FractalParams params() const {
        FractalParams p{lambda, nb};
        p.validate();
        return p;
    }
    EnergyMode energy_mode() const {
        if (mode == "raw") return EnergyMode::raw;
        if (mode == "renormalized") return EnergyMode::renormalized;
        if (mode == "measured") return EnergyMode::measured;
        throw param_error("cli: unknown energy mode " + mode);
    }
    EigenvalueScaling eigen_scaling() const {
        if (scaling == "laplacian") return EigenvalueScaling::laplacian;
        if (scaling == "decimation") return EigenvalueScaling::decimation;
        throw param_error("cli: unknown eigenvalue scaling " + scaling);
    }
};

namespace detail {

inline void write_output(const RunConfig& cfg, const std::string& payload, std::ostream& out) {
    if (cfg.output.empty()) {
        out << payload;
        return;
    }
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f) throw io_error("cli: cannot open output file " + cfg.output);
    f << payload;
    if (!f) throw io_error("cli: write to " + cfg.output + " failed");
}

inline std::vector<double> read_values(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw io_error("cli: cannot open input file " + path);
    nlohmann::json doc;
    try {
        f >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw param_error(std::string("cli: input file is not valid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw param_error("cli: input file must hold a JSON array of numbers");
    std::vector<double> vals;
    for (const auto& v : doc) vals.push_back(v.get<double>());
    return vals;
}

inline std::string dump_json(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

inline VertexFunction input_or_ordinate(const RunConfig& cfg, const GraphLevel& g) {
    if (cfg.input.empty())
        return restrict_to_level(g, [](const Vertex& v) { return v.y; });
    VertexFunction u{g.level(), read_values(cfg.input)};
    if (static_cast<std::int64_t>(u.values.size()) != g.vertex_count())
        throw param_error("cli: input holds " + std::to_string(u.values.size()) +
                          " values, level " + std::to_string(g.level()) + " needs " +
                          std::to_string(g.vertex_count()));
    return u;
}

inline int cmd_graph(const RunConfig& cfg, std::ostream& out) {
    GraphLevel g = build_level(cfg.params(), cfg.level);
    if (cfg.format == "json") {
        write_output(cfg, dump_json(export_graph_json(g)), out);
    } else if (cfg.format == "csv") {
        write_output(cfg, graph_csv(g), out);
    } else if (cfg.format == "svg") {
        SvgOptions opts;
        opts.include_series_curve = cfg.curve;
        opts.curve_samples = cfg.samples;
        opts.tol = cfg.tol;
        write_output(cfg, render_levels_svg({g}, opts), out);
    } else {
        throw param_error("cli: unknown format " + cfg.format);
    }
    return 0;
}

inline int cmd_measure(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const FractalParams p = cfg.params();
    GraphLevel g = build_level(p, cfg.level);
    MeasureTable t = measure_table(g);
    std::vector<double> weights;
    if (cfg.level >= 1) {
        MeasureTable coarse = measure_table(build_level(p, cfg.level - 1));
        weights = replication_weights(t, coarse, p.nb);
    }
    for (std::int64_t j : t.non_simple_polygons)
        err << "measure: cell " << j << " at level " << t.level
            << " reported a self-intersection (diagnostic only)\n";
    if (cfg.format == "json") {
        nlohmann::json doc = export_graph_json(g, &t);
        doc["replication_weights"] = weights;
        doc["vertex_cells"] = t.vertex_cell;
        write_output(cfg, dump_json(doc), out);
    } else if (cfg.format == "csv") {
        write_output(cfg, measure_csv(t, weights), out);
    } else {
        throw param_error("cli: measure supports json or csv");
    }
    return 0;
}

inline int cmd_energy(const RunConfig& cfg, std::ostream& out) {
    const FractalParams p = cfg.params();
    const EnergyMode mode = cfg.energy_mode();
    std::string csv;
    csv_row(csv, {"level", "mode", "value"});
    nlohmann::json rows = nlohmann::json::array();
    GraphLevel g = build_level(p, 0);
    for (int m = 0; m <= cfg.level; ++m) {
        if (m > 0) g = refine(g);
        if (!cfg.input.empty() && m != cfg.level) continue;
        VertexFunction u = input_or_ordinate(cfg, g);
        MeasureTable t;
        const MeasureTable* tp = nullptr;
        if (mode == EnergyMode::measured) {
            t = measure_table(g);
            tp = &t;
        }
        const double e = energy(g, u, u, mode, tp);
        csv_row(csv, {std::to_string(m), cfg.mode, num(e)});
        rows.push_back({{"level", m}, {"mode", cfg.mode}, {"value", e}});
    }
    if (cfg.format == "csv")
        write_output(cfg, csv, out);
    else
        write_output(cfg, dump_json(rows), out);
    return 0;
}

inline int cmd_harmonic(const RunConfig& cfg, std::ostream& out) {
    const FractalParams p = cfg.params();
    VertexFunction u{0, std::vector<double>(static_cast<std::size_t>(p.nb), 0.0)};
    if (!cfg.input.empty()) {
        u.values = read_values(cfg.input);
        if (static_cast<int>(u.values.size()) != p.nb)
            throw param_error("cli: harmonic input must hold nb = " + std::to_string(p.nb) +
                              " boundary values");
    } else {
        u.values[0] = 1.0; // default seed: indicator of the leftmost fixed point
    }
    std::string csv;
    csv_row(csv, {"level", "raw", "renormalized", "measured", "raw_ratio"});
    nlohmann::json rows = nlohmann::json::array();
    GraphLevel g = build_level(p, 0);
    double prev_raw = 0.0;
    for (int m = 0; m <= cfg.level; ++m) {
        if (m > 0) {
            g = refine(g);
            u = harmonic_extension(p, u);
        }
        MeasureTable t = measure_table(g);
        const double raw = energy(g, u, u, EnergyMode::raw);
        const double ren = energy(g, u, u, EnergyMode::renormalized);
        const double mea = energy(g, u, u, EnergyMode::measured, &t);
        const std::string ratio = (m > 0 && prev_raw != 0.0) ? num(raw / prev_raw) : "";
        csv_row(csv, {std::to_string(m), num(raw), num(ren), num(mea), ratio});
        nlohmann::json row = {{"level", m}, {"raw", raw}, {"renormalized", ren},
                              {"measured", mea}};
        if (!ratio.empty()) row["raw_ratio"] = raw / prev_raw;
        rows.push_back(std::move(row));
        prev_raw = raw;
    }
    if (cfg.format == "csv")
        write_output(cfg, csv, out);
    else
        write_output(cfg, dump_json(rows), out);
    return 0;
}

inline int cmd_laplacian(const RunConfig& cfg, std::ostream& out) {
    const FractalParams p = cfg.params();
    const VertexProvider ordinate = [](const Vertex& v) { return v.y; };
    std::string csv;
    nlohmann::json rows = nlohmann::json::array();
    if (cfg.normal) {
        csv_row(csv, {"boundary_index", "level", "approximant"});
        for (int i = 0; i < p.nb; ++i) {
            const std::int64_t k = static_cast<std::int64_t>(i); // level-0 index of P_i
            NormalDerivativeReport rep =
                normal_derivative(p, ordinate, 0, k, 1, cfg.level, cfg.tol);
            for (std::size_t j = 0; j < rep.approximants.size(); ++j) {
                csv_row(csv, {std::to_string(i), std::to_string(rep.levels[j]),
                              num(rep.approximants[j])});
                rows.push_back({{"boundary_index", i}, {"level", rep.levels[j]},
                                {"approximant", rep.approximants[j]}});
            }
        }
    } else {
        if (cfg.base < 1 || cfg.base > cfg.level)
            throw param_error("cli: laplacian needs 1 <= base <= level");
        csv_row(csv, {"k", "x", "level", "renormalized_laplacian"});
        GraphLevel base = build_level(p, cfg.base);
        for (std::int64_t k = 0; k < base.vertex_count(); ++k) {
            if (base.is_boundary(k)) continue;
            const auto seq =
                renormalized_laplacian_seq(p, ordinate, cfg.base, k, cfg.base, cfg.level);
            for (std::size_t j = 0; j < seq.size(); ++j) {
                const int m = cfg.base + static_cast<int>(j);
                csv_row(csv, {std::to_string(k), num(base.abscissa(k)), std::to_string(m),
                              num(seq[j])});
                rows.push_back({{"k", k}, {"x", base.abscissa(k)}, {"level", m},
                                {"renormalized_laplacian", seq[j]}});
            }
        }
    }
    if (cfg.format == "csv")
        write_output(cfg, csv, out);
    else
        write_output(cfg, dump_json(rows), out);
    return 0;
}

inline int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
    const FractalParams p = cfg.params();
    GraphLevel g = build_level(p, cfg.level);
    const auto pairs = direct_spectrum(g, cfg.budget);
    const DerivedConstants d = derived_constants(p);
    if (cfg.format == "csv") {
        write_output(cfg, spectrum_csv(pairs, d, cfg.eigen_scaling()), out);
    } else {
        nlohmann::json rows = nlohmann::json::array();
        std::vector<int> rank;
        for (const EigenPair& e : pairs) {
            while (static_cast<int>(rank.size()) <= e.segment) rank.push_back(0);
            rows.push_back({{"level", e.level},
                            {"segment", e.segment},
                            {"k", ++rank[static_cast<std::size_t>(e.segment)]},
                            {"lambda_tilde", e.lambda_tilde},
                            {"lambda_physical",
                             physical_eigenvalue(e.lambda_tilde, e.level, d,
                                                 cfg.eigen_scaling())},
                            {"residual", e.residual}});
        }
        write_output(cfg, dump_json(rows), out);
    }
    return 0;
}

inline int cmd_decimate(const RunConfig& cfg, std::ostream& out) {
    const int nb = cfg.nb;
    if (nb < 3) throw param_error("params: nb must be an integer >= 3, got " + std::to_string(nb));
    std::string csv;
    csv_row(csv, {"step", "path", "lambda_tilde"});
    nlohmann::json rows = nlohmann::json::array();
    auto emit = [&](int step, const std::string& path, double lt) {
        csv_row(csv, {std::to_string(step), path, num(lt)});
        rows.push_back({{"step", step}, {"path", path}, {"lambda_tilde", lt}});
    };
    emit(0, "", cfg.lambda_tilde);
    if (cfg.branch == "principal" || cfg.lambda_tilde > 4.0) {
        double lt = cfg.lambda_tilde;
        for (int s = 1; s <= cfg.steps; ++s) {
            lt = decimate_forward_value(lt, nb);
            emit(s, "0", lt);
        }
    } else if (cfg.branch == "all") {
        std::vector<std::pair<std::string, double>> frontier = {{"", cfg.lambda_tilde}};
        for (int s = 1; s <= cfg.steps; ++s) {
            std::vector<std::pair<std::string, double>> next;
            for (const auto& [path, lt] : frontier) {
                const auto branches = inverse_branches(lt, nb);
                for (std::size_t b = 0; b < branches.size(); ++b) {
                    std::string sub = path.empty() ? std::to_string(b)
                                                   : path + "-" + std::to_string(b);
                    emit(s, sub, branches[b]);
                    next.emplace_back(std::move(sub), branches[b]);
                }
            }
            frontier = std::move(next);
        }
    } else {
        throw param_error("cli: unknown branch selector " + cfg.branch);
    }
    if (cfg.format == "csv")
        write_output(cfg, csv, out);
    else
        write_output(cfg, dump_json(rows), out);
    return 0;
}

inline int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
    const FractalParams p = cfg.params();
    GraphLevel g = build_level(p, cfg.level);
    if (cfg.format == "csv") {
        write_output(cfg, bounds_csv(g), out);
    } else {
        const BoundsReport rep = check_bounds(g);
        nlohmann::json doc;
        doc["level"] = rep.level;
        doc["lower_constant"] = rep.constants.lower;
        doc["upper_constant"] = rep.constants.upper;
        doc["lower_sine_vacuous"] = rep.constants.lower_sine_vacuous;
        doc["scale"] = rep.scale;
        doc["record_count"] = rep.record_count;
        doc["min_height"] = rep.min_height;
        doc["max_height"] = rep.max_height;
        doc["lower_violations"] = rep.lower_violations;
        doc["upper_violations"] = rep.upper_violations;
        write_output(cfg, dump_json(doc), out);
    }
    return 0;
}

inline int cmd_render(const RunConfig& cfg, std::ostream& out) {
    const FractalParams p = cfg.params();
    SvgOptions opts;
    opts.include_series_curve = cfg.curve;
    opts.curve_samples = cfg.samples;
    opts.tol = cfg.tol;
    std::string svg;
    if (cfg.eigen_index >= 0) {
        GraphLevel g = build_level(p, cfg.level);
        const auto pairs = direct_spectrum(g, cfg.budget);
        if (cfg.eigen_index >= static_cast<int>(pairs.size()))
            throw param_error("cli: eigen index " + std::to_string(cfg.eigen_index) +
                              " out of range (spectrum has " + std::to_string(pairs.size()) +
                              " pairs)");
        svg = render_function_svg(g, pairs[static_cast<std::size_t>(cfg.eigen_index)].eigenfunction,
                                  opts);
    } else {
        std::vector<GraphLevel> levels;
        GraphLevel g = build_level(p, 0);
        levels.push_back(g);
        for (int m = 1; m <= cfg.level; ++m) {
            g = refine(g);
            levels.push_back(g);
        }
        svg = render_levels_svg(levels, opts);
    }
    write_output(cfg, svg, out);
    return 0;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    const auto results = run_acceptance(cfg.seed, out);
    for (const CriterionResult& r : results)
        if (!r.pass) return 1;
    return 0;
}

} // namespace detail

/// Entry point shared by the binary and the tests. Returns the process exit
/// status: 0 success, 1 verification failure, 2 bad arguments, 3 computation
/// error.
inline int run_command(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
    CLI::App app{"graph approximations, Dirichlet energies, Laplacians and spectral "
                 "decimation on the Weierstrass curve"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&cfg](CLI::App* sub) {
        sub->add_option("--lambda", cfg.lambda, "series ratio in (0,1)");
        sub->add_option("--nb", cfg.nb, "integer base >= 3");
        sub->add_option("--tol", cfg.tol, "series evaluation tolerance");
        sub->add_option("--seed", cfg.seed, "seed for randomized checks");
        sub->add_option("--format", cfg.format, "output format: json, csv or svg");
        sub->add_option("--output", cfg.output, "output path (default stdout)");
        sub->add_option("--dirichlet", cfg.dirichlet, "Dirichlet set selector")
            ->check(CLI::IsMember({"v0"}));
    };

    CLI::App* graph = app.add_subcommand("graph", "emit one level of the vertex graph");
    add_common(graph);
    graph->add_option("--level", cfg.level, "level m >= 0");
    graph->add_flag("--curve", cfg.curve, "overlay the sampled series (svg)");
    graph->add_option("--samples", cfg.samples, "series samples for svg overlays");

    CLI::App* measure = app.add_subcommand("measure", "cell measures, weights, vertex cells");
    add_common(measure);
    measure->add_option("--level", cfg.level, "level m >= 0");

    CLI::App* energy = app.add_subcommand("energy", "edge-increment energies per level");
    add_common(energy);
    energy->add_option("--level", cfg.level, "deepest level");
    energy->add_option("--mode", cfg.mode, "raw, renormalized or measured")
        ->check(CLI::IsMember({"raw", "renormalized", "measured"}));
    energy->add_option("--input", cfg.input, "JSON array of vertex values (deepest level only)");

    CLI::App* harmonic = app.add_subcommand("harmonic", "repeated minimum-energy extension");
    add_common(harmonic);
    harmonic->add_option("--level", cfg.level, "deepest level");
    harmonic->add_option("--input", cfg.input, "JSON array of nb boundary values");

    CLI::App* laplacian = app.add_subcommand("laplacian",
                                             "renormalized interior stencils / boundary flux");
    add_common(laplacian);
    laplacian->add_option("--level", cfg.level, "deepest level");
    laplacian->add_option("--base", cfg.base, "base level whose interior is tracked");
    laplacian->add_flag("--normal", cfg.normal, "emit boundary-flux approximants instead");

    CLI::App* spectrum = app.add_subcommand("spectrum", "direct interior spectrum of one level");
    add_common(spectrum);
    spectrum->add_option("--level", cfg.level, "level m >= 1");
    spectrum->add_option("--budget", cfg.budget, "interior size cap for the eigensolver");
    spectrum->add_option("--scaling", cfg.scaling, "physical eigenvalue scaling")
        ->check(CLI::IsMember({"laplacian", "decimation"}));

    CLI::App* decimate = app.add_subcommand("decimate", "eigenvalue propagation across levels");
    add_common(decimate);
    decimate->add_option("--lambda-tilde", cfg.lambda_tilde, "starting dimensionless eigenvalue");
    decimate->add_option("--steps", cfg.steps, "number of refinement steps");
    decimate->add_option("--branch", cfg.branch, "principal or all")
        ->check(CLI::IsMember({"principal", "all"}));

    CLI::App* bounds = app.add_subcommand("bounds", "cell heights against the oscillation bounds");
    add_common(bounds);
    bounds->add_option("--level", cfg.level, "level m >= 0");

    CLI::App* render = app.add_subcommand("render", "SVG of level overlays or an eigenfunction");
    add_common(render);
    render->add_option("--level", cfg.level, "deepest level to draw");
    render->add_option("--eigen", cfg.eigen_index, "draw this eigenfunction (spectrum index)");
    render->add_flag("--curve", cfg.curve, "overlay the sampled series");
    render->add_option("--samples", cfg.samples, "series samples for the overlay");
    render->add_option("--budget", cfg.budget, "interior size cap for the eigensolver");

    CLI::App* verify = app.add_subcommand("verify", "run the full acceptance suite");
    add_common(verify);

    // CLI11 consumes arguments back to front.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        using namespace detail;
        if (graph->parsed()) return cmd_graph(cfg, out);
        if (measure->parsed()) return cmd_measure(cfg, out, err);
        if (energy->parsed()) return cmd_energy(cfg, out);
        if (harmonic->parsed()) return cmd_harmonic(cfg, out);
        if (laplacian->parsed()) return cmd_laplacian(cfg, out);
        if (spectrum->parsed()) return cmd_spectrum(cfg, out);
        if (decimate->parsed()) return cmd_decimate(cfg, out);
        if (bounds->parsed()) return cmd_bounds(cfg, out);
        if (render->parsed()) return cmd_render(cfg, out);
        if (verify->parsed()) return cmd_verify(cfg, out);
    } catch (const param_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
    err << "error: no subcommand selected\n";
    return 2;
}

} // namespace cli
} // namespace wgl
