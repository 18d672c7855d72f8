#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wgl/cli.hpp"

using wgl::cli::run_command;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_command(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("graph subcommand emits the documented JSON schema") {
    const RunResult r = run({"graph", "--lambda", "0.5", "--nb", "3", "--level", "1",
                             "--format", "json"});
    REQUIRE(r.code == 0);
    const nlohmann::json doc = nlohmann::json::parse(r.out);
    REQUIRE(doc["params"]["lambda"] == 0.5);
    REQUIRE(doc["params"]["nb"] == 3);
    REQUIRE(doc["level"] == 1);
    REQUIRE(doc["vertices"].size() == 7);
    REQUIRE(doc["edges"].size() == 6);
    REQUIRE(doc["polygons"].size() == 3);
    // junction vertex at x = 1/3 carries the ordinate W(1/3) = 1/2 and
    // serializes it losslessly (shortest round-trip decimal)
    REQUIRE(doc["vertices"][2]["k"] == 2);
    REQUIRE(std::abs(doc["vertices"][2]["y"].get<double>() - 0.5) <= 1e-12);
    REQUIRE(doc["vertices"][2]["y"].get<double>() ==
            wgl::build_level({0.5, 3}, 1).ordinate(2));
    REQUIRE(doc["vertices"][2]["power"] == 0.5);

    SECTION("level 0 structure counts") {
        const RunResult r0 = run({"graph", "--lambda", "0.5", "--nb", "3", "--level", "0",
                                  "--format", "json"});
        const nlohmann::json d0 = nlohmann::json::parse(r0.out);
        REQUIRE(d0["vertices"].size() == 3);
        REQUIRE(d0["edges"].size() == 2);
        REQUIRE(d0["polygons"].size() == 1);
    }

    SECTION("re-parsing reproduces identical k indices") {
        std::vector<std::int64_t> ks;
        for (const auto& v : doc["vertices"]) ks.push_back(v["k"].get<std::int64_t>());
        const wgl::GraphLevel rebuilt = wgl::build_level(
            {doc["params"]["lambda"].get<double>(), doc["params"]["nb"].get<int>()},
            doc["level"].get<int>());
        REQUIRE(static_cast<std::int64_t>(ks.size()) == rebuilt.vertex_count());
        for (std::size_t i = 0; i < ks.size(); ++i)
            REQUIRE(ks[i] == static_cast<std::int64_t>(i));
        for (const auto& v : doc["vertices"])
            REQUIRE(v["x"].get<double>() == rebuilt.abscissa(v["k"].get<std::int64_t>()));
    }
}

TEST_CASE("csv outputs use CRLF and fixed columns") {
    const RunResult graph = run({"graph", "--lambda", "0.5", "--nb", "3", "--level", "1",
                                 "--format", "csv"});
    REQUIRE(graph.code == 0);
    REQUIRE(graph.out.rfind("k,x,y,power\r\n", 0) == 0);
    REQUIRE(graph.out.find("\r\n") != std::string::npos);

    const RunResult spectrum = run({"spectrum", "--lambda", "0.5", "--nb", "3", "--level", "1",
                                    "--format", "csv"});
    REQUIRE(spectrum.code == 0);
    REQUIRE(spectrum.out.rfind("level,segment,k,lambda_tilde,lambda_physical,residual\r\n", 0) ==
            0);

    const RunResult dec = run({"decimate", "--lambda-tilde", "6", "--nb", "3", "--steps", "1",
                               "--format", "csv"});
    REQUIRE(dec.code == 0);
    REQUIRE(dec.out.find("4.195823345445647") != std::string::npos);
}

TEST_CASE("deterministic output") {
    const std::vector<std::string> cmd = {"measure", "--lambda", "0.5", "--nb", "3",
                                          "--level", "2", "--format", "json"};
    const RunResult a = run(cmd);
    const RunResult b = run(cmd);
    REQUIRE(a.code == 0);
    REQUIRE(a.out == b.out);

    const std::vector<std::string> svg_cmd = {"render", "--lambda", "0.5", "--nb", "3",
                                              "--level", "2", "--format", "svg"};
    REQUIRE(run(svg_cmd).out == run(svg_cmd).out);
}

TEST_CASE("svg rendering") {
    SECTION("level overlay") {
        const RunResult r = run({"render", "--lambda", "0.5", "--nb", "3", "--level", "2"});
        REQUIRE(r.code == 0);
        REQUIRE(r.out.rfind("<?xml version=\"1.0\"", 0) == 0);
        REQUIRE(r.out.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"") !=
                std::string::npos);
        REQUIRE(r.out.find("viewBox=") != std::string::npos);
        // three levels, three polylines
        std::size_t count = 0, pos = 0;
        while ((pos = r.out.find("<polyline", pos)) != std::string::npos) {
            ++count;
            pos += 9;
        }
        REQUIRE(count == 3);
        REQUIRE(r.out.find("</svg>") != std::string::npos);
    }
    SECTION("eigenfunction plot has one point per vertex") {
        const RunResult r = run({"render", "--lambda", "0.5", "--nb", "3", "--level", "1",
                                 "--eigen", "0"});
        REQUIRE(r.code == 0);
        const std::size_t start = r.out.rfind("points=\"");
        REQUIRE(start != std::string::npos);
        const std::size_t end = r.out.find('"', start + 8);
        const std::string pts = r.out.substr(start + 8, end - start - 8);
        std::size_t pairs = 1;
        for (char c : pts)
            if (c == ' ') ++pairs;
        REQUIRE(pairs == 7);
    }
}

TEST_CASE("exit codes") {
    SECTION("bad parameters exit 2 naming the constraint") {
        const RunResult r = run({"graph", "--nb", "1"});
        REQUIRE(r.code == 2);
        REQUIRE(r.err.find("nb") != std::string::npos);
    }
    SECTION("unknown flags exit 2") {
        REQUIRE(run({"graph", "--frobnicate"}).code == 2);
        REQUIRE(run({}).code == 2);
    }
    SECTION("degenerate eigenvalue argument exits 2") {
        const RunResult r = run({"decimate", "--lambda-tilde", "4", "--nb", "3"});
        REQUIRE(r.code == 2);
        REQUIRE(r.err.find("degenerate") != std::string::npos);
    }
    SECTION("computation errors exit 3") {
        const RunResult r = run({"spectrum", "--lambda", "0.5", "--nb", "3", "--level", "2",
                                 "--budget", "3"});
        REQUIRE(r.code == 3);
        REQUIRE(r.err.find("budget") != std::string::npos);
    }
    SECTION("unwritable output exits 3") {
        const RunResult r = run({"graph", "--lambda", "0.5", "--nb", "3", "--level", "0",
                                 "--output", "/nonexistent-dir/out.json"});
        REQUIRE(r.code == 3);
    }
}

TEST_CASE("decimate enumerates branches") {
    const RunResult r = run({"decimate", "--lambda-tilde", "1", "--nb", "3", "--steps", "2",
                             "--branch", "all", "--format", "csv"});
    REQUIRE(r.code == 0);
    // 1 root + 3 branches + 9 grandchildren
    std::size_t lines = 0, pos = 0;
    while ((pos = r.out.find("\r\n", pos)) != std::string::npos) {
        ++lines;
        pos += 2;
    }
    REQUIRE(lines == 1 + 1 + 3 + 9);
    REQUIRE(r.out.find("0.12061475842818") != std::string::npos);
}

TEST_CASE("harmonic subcommand reports the extension energy ladder") {
    const RunResult r = run({"harmonic", "--lambda", "0.5", "--nb", "3", "--level", "3",
                             "--format", "json"});
    REQUIRE(r.code == 0);
    const nlohmann::json rows = nlohmann::json::parse(r.out);
    REQUIRE(rows.size() == 4);
    for (std::size_t m = 1; m < rows.size(); ++m) {
        const double ratio = rows[m]["raw_ratio"].get<double>();
        REQUIRE(std::abs(ratio - 4.0 / 3.0) <= 1e-10);
    }
}

TEST_CASE("energy subcommand accepts an input vector") {
    const std::string path = "cli_energy_input.json";
    {
        std::ofstream f(path);
        f << "[0,1,0]";
    }
    const RunResult good = run({"energy", "--lambda", "0.5", "--nb", "3", "--level", "0",
                                "--input", path, "--format", "csv"});
    const RunResult bad = run({"energy", "--lambda", "0.5", "--nb", "3", "--level", "1",
                               "--input", path});
    std::remove(path.c_str());

    REQUIRE(good.code == 0);
    // two unit increments over h_0^2
    const std::size_t comma = good.out.rfind(',');
    REQUIRE(comma != std::string::npos);
    const double value = std::stod(good.out.substr(comma + 1));
    REQUIRE(std::abs(value - 4.7960925782424287) <= 1e-12 * 4.7960925782424287);
    REQUIRE(bad.code == 2);
}

TEST_CASE("bounds subcommand reports violations as data") {
    const RunResult r = run({"bounds", "--lambda", "0.5", "--nb", "3", "--level", "2",
                             "--format", "json"});
    REQUIRE(r.code == 0);
    const nlohmann::json doc = nlohmann::json::parse(r.out);
    REQUIRE(doc["record_count"] == 18);
    REQUIRE(doc["lower_violations"].size() == 4);
    REQUIRE(doc["upper_violations"].empty());
}

TEST_CASE("laplacian subcommand emits the renormalized sequence") {
    const RunResult r = run({"laplacian", "--lambda", "0.5", "--nb", "3", "--level", "4",
                             "--base", "1", "--format", "csv"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.rfind("k,x,level,renormalized_laplacian\r\n", 0) == 0);
    const RunResult n = run({"laplacian", "--lambda", "0.5", "--nb", "3", "--level", "4",
                             "--normal", "--format", "csv"});
    REQUIRE(n.code == 0);
    REQUIRE(n.out.rfind("boundary_index,level,approximant\r\n", 0) == 0);
}

TEST_CASE("dirichlet selector accepts only the boundary set") {
    REQUIRE(run({"graph", "--lambda", "0.5", "--nb", "3", "--level", "1",
                 "--dirichlet", "v0"}).code == 0);
    REQUIRE(run({"graph", "--lambda", "0.5", "--nb", "3", "--level", "1",
                 "--dirichlet", "cycle"}).code == 2);
}
