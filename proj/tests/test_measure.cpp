#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "wgl/energy.hpp"
#include "wgl/graph.hpp"
#include "wgl/measure.hpp"

using namespace wgl;

TEST_CASE("level-0 normalization") {
    FractalParams p{0.5, 3};
    // triangle (0,2), (1/2,-2), (1,2): raw shoelace area 2
    REQUIRE(std::abs(level0_raw_area(p) - 2.0) <= 1e-14);
    const GraphLevel g = build_level(p, 0);
    const auto mu = polygon_measures(g);
    REQUIRE(mu.size() == 1);
    REQUIRE(std::abs(mu[0] - 1.0) <= 1e-14);
}

TEST_CASE("level-1 cell measures, hand shoelace") {
    FractalParams p{0.5, 3};
    const auto mu = polygon_measures(build_level(p, 1));
    REQUIRE(mu.size() == 3);
    REQUIRE(std::abs(mu[0] - 7.0 / 48.0) <= 1e-15);
    REQUIRE(std::abs(mu[1] - 5.0 / 24.0) <= 1e-15);
    REQUIRE(std::abs(mu[2] - 7.0 / 48.0) <= 1e-15);
    for (double v : mu) REQUIRE(v > 0.0);
}

TEST_CASE("shoelace is translation invariant") {
    FractalParams p{0.5, 3};
    const GraphLevel g = build_level(p, 2);
    std::vector<double> shifted(g.ordinates());
    for (double& y : shifted) y += 17.25;
    const GraphLevel gs(p, 2, std::move(shifted));
    const auto a = polygon_measures(g);
    const auto b = polygon_measures(gs);
    for (std::size_t j = 0; j < a.size(); ++j)
        REQUIRE(std::abs(a[j] - b[j]) <= 1e-12 * a[j]);
}

TEST_CASE("degenerate cells are reported with their index") {
    FractalParams p{0.5, 3};
    const GraphLevel flat(p, 0, {1.0, 1.0, 1.0});
    REQUIRE_THROWS_AS(polygon_measures(flat), geometry_error);
    REQUIRE_THROWS_WITH(polygon_measures(flat), Catch::Matchers::ContainsSubstring("index 0"));
}

TEST_CASE("replication weights") {
    FractalParams p{0.5, 3};

    SECTION("level 1: weights are the images' measures") {
        const auto w = replication_weights(p, 1);
        REQUIRE(w.size() == 3);
        REQUIRE(std::abs(w[0] - 7.0 / 48.0) <= 1e-14);
        REQUIRE(std::abs(w[1] - 5.0 / 24.0) <= 1e-14);
        REQUIRE(std::abs(w[2] - 7.0 / 48.0) <= 1e-14);
    }

    SECTION("weights times the coarse total reproduce the fine total") {
        for (int m = 1; m <= 4; ++m) {
            const GraphLevel coarse = build_level(p, m - 1);
            const GraphLevel fine = refine(coarse);
            const MeasureTable tc = measure_table(coarse);
            const MeasureTable tf = measure_table(fine);
            const auto w = replication_weights(tf, tc, p.nb);
            double s = 0.0;
            for (double v : w) {
                REQUIRE(v > 0.0);
                s += v;
            }
            REQUIRE(std::abs(s * tc.total() - tf.total()) <= 1e-12 * tf.total());
        }
    }

    SECTION("level 0 has no weights") {
        REQUIRE_THROWS_AS(replication_weights(p, 0), param_error);
    }
}

TEST_CASE("vertex cell measures") {
    FractalParams p{0.5, 3};
    SECTION("level 0: single unit cell everywhere") {
        const MeasureTable t = measure_table(build_level(p, 0));
        for (double a : t.vertex_cell) REQUIRE(a == 1.0);
    }
    SECTION("level 1: junctions average the two neighbouring cells") {
        const GraphLevel g = build_level(p, 1);
        const MeasureTable t = measure_table(g);
        REQUIRE(std::abs(t.vertex_cell[2] -
                         0.5 * (t.polygon_measure[0] + t.polygon_measure[1])) <= 1e-15);
        REQUIRE(std::abs(t.vertex_cell[4] -
                         0.5 * (t.polygon_measure[1] + t.polygon_measure[2])) <= 1e-15);
        // power-one vertices take their own cell's measure
        REQUIRE(t.vertex_cell[0] == t.polygon_measure[0]);
        REQUIRE(t.vertex_cell[3] == t.polygon_measure[1]);
        REQUIRE(t.vertex_cell[6] == t.polygon_measure[2]);
    }
}

TEST_CASE("quadrature") {
    FractalParams p{0.5, 3};

    SECTION("unit function at level 0 integrates to 1") {
        const GraphLevel g = build_level(p, 0);
        const MeasureTable t = measure_table(g);
        const VertexFunction ones{0, {1.0, 1.0, 1.0}};
        REQUIRE(std::abs(integrate(ones, g, t) - 1.0) <= 1e-15);
        const VertexFunction zeros{0, {0.0, 0.0, 0.0}};
        REQUIRE(integrate(zeros, g, t) == 0.0);
    }

    SECTION("linearity") {
        const GraphLevel g = build_level(p, 2);
        const MeasureTable t = measure_table(g);
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (int trial = 0; trial < 20; ++trial) {
            VertexFunction u{2, std::vector<double>(19)};
            VertexFunction v{2, std::vector<double>(19)};
            for (auto& x : u.values) x = dist(rng);
            for (auto& x : v.values) x = dist(rng);
            const double a = dist(rng), b = dist(rng);
            VertexFunction w{2, std::vector<double>(19)};
            for (std::size_t i = 0; i < 19; ++i)
                w.values[i] = a * u.values[i] + b * v.values[i];
            const double lhs = integrate(w, g, t);
            const double rhs = a * integrate(u, g, t) + b * integrate(v, g, t);
            REQUIRE(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
        }
    }

    SECTION("vertex splines integrate to A_m(X)/nb") {
        GraphLevel g = build_level(p, 0);
        for (int m = 0; m <= 5; ++m) {
            if (m > 0) g = refine(g);
            const MeasureTable t = measure_table(g);
            for (std::int64_t k = 0; k < g.vertex_count(); ++k) {
                const VertexFunction psi = spline_basis(p, m, k, m);
                const double want = t.vertex_cell[static_cast<std::size_t>(k)] / p.nb;
                REQUIRE(std::abs(integrate(psi, g, t) - want) <= 1e-14 * want);
            }
        }
    }

    SECTION("shape mismatch is rejected") {
        const GraphLevel g = build_level(p, 1);
        const MeasureTable t = measure_table(g);
        REQUIRE_THROWS_AS(integrate(VertexFunction{1, {1.0, 2.0}}, g, t), shape_error);
        REQUIRE_THROWS_AS(integrate(VertexFunction{0, {1, 1, 1}}, g, t), shape_error);
    }
}

TEST_CASE("refinement sequence of the unit integral is logged") {
    // the quadrature of 1 tracks the shrinking cell areas; no limit value is
    // asserted, the sequence is just required to stay finite and positive
    FractalParams p{0.5, 3};
    GraphLevel g = build_level(p, 0);
    double prev = 0.0;
    for (int m = 0; m <= 8; ++m) {
        if (m > 0) g = refine(g);
        const MeasureTable t = measure_table(g);
        VertexFunction ones{m, std::vector<double>(static_cast<std::size_t>(g.vertex_count()), 1.0)};
        const double v = integrate(ones, g, t);
        INFO("integrate(1, " << m << ") = " << v << " (difference " << v - prev << ")");
        REQUIRE(std::isfinite(v));
        REQUIRE(v > 0.0);
        prev = v;
    }
}

TEST_CASE("self-intersection diagnostic stays a diagnostic") {
    FractalParams p{0.5, 3};
    for (int m = 0; m <= 3; ++m) {
        const MeasureTable t = measure_table(build_level(p, m));
        INFO("level " << m << ": " << t.non_simple_polygons.size() << " flagged cells");
        SUCCEED();
    }
    // triangles can never self-intersect
    REQUIRE(measure_table(build_level(p, 3)).non_simple_polygons.empty());
}
