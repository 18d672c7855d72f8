#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <set>
#include <vector>

#include "wgl/graph.hpp"
#include "wgl/params.hpp"
#include "wgl/spectral.hpp"

using namespace wgl;

namespace {
constexpr double kPi = 3.14159265358979323846;

// 40-digit reference values
constexpr double kForward6 = 4.1958233454456471528;
constexpr double kForward5 = 4.1038034027355365332;
constexpr double kForward50 = 5.9089155359136619152;
constexpr double kPhi6 = 0.26794919243112270647; // 2 - sqrt(3)

double closed_form(int k, int slots) { return 2.0 - 2.0 * std::cos(k * kPi / slots); }
} // namespace

TEST_CASE("phi pair") {
    SECTION("phi(6) = 2 - sqrt(3)") {
        REQUIRE(std::abs(phi_forward(6.0) - kPhi6) <= 1e-15);
    }
    SECTION("inverse at the boundary of its range") {
        REQUIRE(std::abs(phi_inverse(0.999999) - 4.0) <= 1e-6 + 1e-9);
        REQUIRE(phi_inverse(0.5) == 4.5);
    }
    SECTION("inverse of forward is the identity on (4, 1e6]") {
        for (int i = 1; i <= 500; ++i) {
            const double x = std::exp(std::log(4.0) + (std::log(1e6) - std::log(4.0)) * i / 500.0);
            REQUIRE(std::abs(phi_inverse(phi_forward(x)) - x) <= 1e-10 * x);
        }
    }
    SECTION("domain errors name the branch cut") {
        REQUIRE_THROWS_AS(phi_forward(4.0), param_error);
        REQUIRE_THROWS_AS(phi_forward(3.999), param_error);
        REQUIRE_THROWS_WITH(phi_forward(2.0), Catch::Matchers::ContainsSubstring("4"));
        REQUIRE_THROWS_AS(phi_inverse(0.0), param_error);
        REQUIRE_THROWS_AS(phi_inverse(1.0), param_error);
        REQUIRE_THROWS_AS(phi_inverse(1.7), param_error);
    }
}

TEST_CASE("characteristic roots") {
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> osc(1e-6, 4.0 - 1e-6);
    std::uniform_real_distribution<double> real_case(4.0 + 1e-6, 100.0);
    for (int t = 0; t < 1000; ++t) {
        const double lt = (t % 2 == 0) ? osc(rng) : real_case(rng);
        const DecimationState s = make_decimation_state(lt);
        const std::complex<double> prod = s.root1 * s.root2;
        const std::complex<double> sum = s.root1 + s.root2;
        REQUIRE(std::abs(prod - 1.0) <= 1e-12);
        REQUIRE(std::abs(sum - (2.0 - lt)) <= 1e-12);
        if (lt < 4.0) REQUIRE(std::abs(std::abs(s.root1) - 1.0) <= 1e-12);
        REQUIRE(s.discriminant == (lt - 2.0) * (lt - 2.0) - 4.0);
    }
}

TEST_CASE("forward eigenvalue map") {
    SECTION("real-root regime, frozen references") {
        REQUIRE(std::abs(decimate_forward_value(6.0, 3) - kForward6) <= 1e-12);
        REQUIRE(std::abs(decimate_forward_value(5.0, 3) - kForward5) <= 1e-12);
        REQUIRE(std::abs(decimate_forward_value(50.0, 3) - kForward50) <= 1e-12);
    }
    SECTION("oscillatory regime divides the phase") {
        REQUIRE(std::abs(decimate_forward_value(1.0, 3) - closed_form(1, 9)) <= 1e-13);
        REQUIRE(std::abs(decimate_forward_value(3.0, 3) - closed_form(2, 9)) <= 1e-13);
    }
    SECTION("outputs stay above 4 when inputs are") {
        std::mt19937_64 rng(71);
        std::uniform_real_distribution<double> dist(4.0 + 1e-9, 1e5);
        for (int t = 0; t < 300; ++t) {
            const double lt = dist(rng);
            REQUIRE(decimate_forward_value(lt, 3) > 4.0);
        }
    }
    SECTION("iterates decrease to the fixed point 4") {
        double lt = 50.0;
        for (int i = 0; i < 40 && std::abs(lt - 4.0) > 1e-10; ++i) {
            const double next = decimate_forward_value(lt, 3);
            REQUIRE(next < lt);
            REQUIRE(next > 4.0);
            lt = next;
        }
        REQUIRE(std::abs(lt - 4.0) <= 1e-10);
    }
    SECTION("degenerate and out-of-domain values are rejected") {
        REQUIRE_THROWS_AS(decimate_forward_value(4.0, 3), param_error);
        REQUIRE_THROWS_AS(decimate_forward_value(0.0, 3), param_error);
        REQUIRE_THROWS_AS(decimate_forward_value(-1.0, 3), param_error);
    }
    SECTION("state wrapper advances the level") {
        const DecimationState s0 = make_decimation_state(6.0, 0);
        const DecimationState s1 = decimate_forward(s0, 3);
        REQUIRE(s1.level == 1);
        REQUIRE(std::abs(s1.lambda_tilde - kForward6) <= 1e-12);
    }
}

TEST_CASE("branch enumeration") {
    SECTION("branches of 1 and 3 at nb = 3") {
        const auto b1 = inverse_branches(1.0, 3); // theta = pi/3
        REQUIRE(b1.size() == 3);
        REQUIRE(std::abs(b1[0] - closed_form(1, 9)) <= 1e-12);
        REQUIRE(std::abs(b1[1] - closed_form(5, 9)) <= 1e-12);
        REQUIRE(std::abs(b1[2] - closed_form(7, 9)) <= 1e-12);
        const auto b3 = inverse_branches(3.0, 3); // theta = 2 pi/3
        REQUIRE(b3.size() == 3);
        REQUIRE(std::abs(b3[0] - closed_form(2, 9)) <= 1e-12);
        REQUIRE(std::abs(b3[1] - closed_form(4, 9)) <= 1e-12);
        REQUIRE(std::abs(b3[2] - closed_form(8, 9)) <= 1e-12);
    }
    SECTION("every branch maps back under nb-fold phase multiplication") {
        std::mt19937_64 rng(73);
        std::uniform_real_distribution<double> dist(1e-3, 4.0 - 1e-3);
        for (int nb : {3, 4, 5}) {
            for (int t = 0; t < 100; ++t) {
                const double lt = dist(rng);
                const auto branches = inverse_branches(lt, nb);
                REQUIRE(branches.size() == static_cast<std::size_t>(nb));
                for (double b : branches) {
                    const double theta = std::acos(1.0 - b / 2.0);
                    const double back = 2.0 - 2.0 * std::cos(nb * theta);
                    REQUIRE(std::abs(back - lt) <= 1e-12 * (1.0 + lt));
                }
            }
        }
    }
    SECTION("domain") {
        REQUIRE_THROWS_AS(inverse_branches(4.5, 3), param_error);
        REQUIRE_THROWS_AS(inverse_branches(0.0, 3), param_error);
        REQUIRE_THROWS_AS(inverse_branches(4.0, 3), param_error);
    }
}

TEST_CASE("direct spectrum against the path closed form") {
    FractalParams p{0.5, 3};

    SECTION("level 1: {1, 3} with multiplicity two") {
        const auto s = direct_spectrum(build_level(p, 1));
        REQUIRE(s.size() == 4);
        const double want[4] = {1.0, 1.0, 3.0, 3.0};
        for (std::size_t i = 0; i < 4; ++i) {
            REQUIRE(std::abs(s[i].lambda_tilde - want[i]) <= 1e-12);
            REQUIRE(s[i].residual <= 1e-8);
        }
        REQUIRE(s[0].segment != s[1].segment);
    }
    SECTION("level 2: 2 - 2 cos(k pi/9), k = 1..8, each twice") {
        const auto s = direct_spectrum(build_level(p, 2));
        REQUIRE(s.size() == 16);
        for (std::size_t i = 0; i < 16; ++i) {
            const int k = static_cast<int>(i / 2) + 1;
            REQUIRE(std::abs(s[i].lambda_tilde - closed_form(k, 9)) <= 1e-9);
        }
    }
    SECTION("eigenvalue count equals the interior size") {
        for (int nb : {3, 4}) {
            FractalParams q{1.5 / nb, nb};
            const GraphLevel g = build_level(q, 2);
            REQUIRE(static_cast<std::int64_t>(direct_spectrum(g).size()) == g.interior_count());
        }
        // for nb = 3 this is 2 nb^m - 2
        REQUIRE(build_level(p, 3).interior_count() == 2 * 27 - 2);
    }
    SECTION("eigenfunctions satisfy the eigen-equation") {
        const GraphLevel g = build_level(p, 2);
        const DerivedConstants d = derived_constants(p);
        const double h2 = d.h_m(2) * d.h_m(2);
        for (const EigenPair& e : direct_spectrum(g)) {
            REQUIRE(eigen_residual(g, e.eigenfunction, e.lambda_tilde) == e.residual);
            REQUIRE(e.residual * h2 <= 1e-12); // dimensionless residual
        }
    }
    SECTION("level 0 and budget overruns are rejected") {
        REQUIRE_THROWS_AS(direct_spectrum(build_level(p, 0)), param_error);
        REQUIRE_THROWS_AS(direct_spectrum(build_level(p, 2), 3), budget_error);
    }
}

TEST_CASE("eigenfunction extension") {
    FractalParams p{0.5, 3};
    const GraphLevel g1 = build_level(p, 1);
    const auto s1 = direct_spectrum(g1);

    SECTION("zero input extends to zero") {
        const VertexFunction zero{1, std::vector<double>(7, 0.0)};
        const ExtensionResult r = extend_eigenfunction(p, zero, closed_form(1, 9));
        for (double v : r.pair.eigenfunction.values) REQUIRE(v == 0.0);
        REQUIRE(r.new_point_residual == 0.0);
        REQUIRE(r.old_point_residual == 0.0);
    }

    SECTION("principal branch of the lowest eigenvalue") {
        const EigenPair& base = s1[0]; // lambda_tilde = 1
        const ExtensionResult r = extend_eigenfunction(p, base.eigenfunction, closed_form(1, 9));
        REQUIRE(r.pair.level == 2);
        REQUIRE(r.new_point_residual <= 1e-10);
        REQUIRE(r.old_point_residual <= 1e-9);

        // cross-check against the directly computed level-2 eigenvector on
        // the same segment
        const GraphLevel g2 = build_level(p, 2);
        const auto s2 = direct_spectrum(g2);
        const EigenPair* direct = nullptr;
        for (const EigenPair& e : s2)
            if (std::abs(e.lambda_tilde - closed_form(1, 9)) <= 1e-12 &&
                e.segment == base.segment)
                direct = &e;
        REQUIRE(direct != nullptr);
        double dot = 0.0, na = 0.0, nb2 = 0.0;
        for (std::size_t i = 0; i < r.pair.eigenfunction.values.size(); ++i) {
            dot += r.pair.eigenfunction.values[i] * direct->eigenfunction.values[i];
            na += r.pair.eigenfunction.values[i] * r.pair.eigenfunction.values[i];
            nb2 += direct->eigenfunction.values[i] * direct->eigenfunction.values[i];
        }
        REQUIRE(std::abs(std::abs(dot) / std::sqrt(na * nb2) - 1.0) <= 1e-10);
    }

    SECTION("all admissible branches keep both residuals small") {
        for (const EigenPair& base : s1) {
            for (double b : inverse_branches(base.lambda_tilde, 3)) {
                const ExtensionResult r = extend_eigenfunction(p, base.eigenfunction, b);
                REQUIRE(r.new_point_residual <= 1e-10);
                REQUIRE(r.old_point_residual <= 1e-9);
            }
        }
    }

    SECTION("forbidden eigenvalues are rejected") {
        // theta = pi/3 makes r1^3 = r2^3 = -1
        REQUIRE_THROWS_WITH(extend_eigenfunction(p, s1[0].eigenfunction, 1.0),
                            Catch::Matchers::ContainsSubstring("forbidden"));
        REQUIRE_THROWS_WITH(extend_eigenfunction(p, s1[0].eigenfunction, 3.0),
                            Catch::Matchers::ContainsSubstring("forbidden"));
    }

    SECTION("boundary data must vanish") {
        VertexFunction bad{1, std::vector<double>(7, 0.0)};
        bad.values[0] = 1.0;
        REQUIRE_THROWS_AS(extend_eigenfunction(p, bad, closed_form(1, 9)), param_error);
    }
}

TEST_CASE("decimation closure of the spectrum") {
    FractalParams p{0.5, 3};
    GraphLevel coarse = build_level(p, 1);
    auto coarse_spec = direct_spectrum(coarse);
    for (int m = 2; m <= 4; ++m) {
        const GraphLevel fine = refine(coarse);
        const auto fine_spec = direct_spectrum(fine);

        std::set<double> coarse_vals;
        for (const EigenPair& e : coarse_spec) coarse_vals.insert(e.lambda_tilde);
        std::vector<double> branch_values;
        for (double lt : coarse_vals)
            for (double b : inverse_branches(lt, 3)) branch_values.push_back(b);

        const std::int64_t slots = ipow(3, m);
        std::vector<int> exceptional;
        for (int k = 1; k < slots; ++k) {
            const double v = closed_form(k, static_cast<int>(slots));
            bool matched = false;
            for (double b : branch_values)
                if (std::abs(v - b) <= 1e-9) matched = true;
            if (!matched) exceptional.push_back(k);
        }
        // the unreachable indices are exactly the two multiples of 3^(m-1),
        // in particular multiples of 3
        const std::int64_t step = ipow(3, m - 1);
        REQUIRE(exceptional ==
                std::vector<int>{static_cast<int>(step), static_cast<int>(2 * step)});
        for (int k : exceptional) REQUIRE(k % 3 == 0);

        // every directly computed eigenvalue is matched or exceptional
        for (const EigenPair& e : fine_spec) {
            bool matched = false;
            for (double b : branch_values)
                if (std::abs(e.lambda_tilde - b) <= 1e-9) matched = true;
            if (!matched) {
                bool is_exceptional = false;
                for (int k : exceptional)
                    if (std::abs(e.lambda_tilde - closed_form(k, static_cast<int>(slots))) <= 1e-9)
                        is_exceptional = true;
                REQUIRE(is_exceptional);
            }
        }
        coarse = fine;
        coarse_spec = fine_spec;
    }
}

TEST_CASE("physical eigenvalue scalings") {
    FractalParams p{0.5, 3};
    const DerivedConstants d = derived_constants(p);
    const DecimationState s = make_decimation_state(1.0, 2);
    const double lap = s.lambda_physical(d, EigenvalueScaling::laplacian);
    const double dec = s.lambda_physical(d, EigenvalueScaling::decimation);
    REQUIRE(std::abs(lap - 1.0 / (d.h_m(2) * d.h_m(2))) <= 1e-12 * lap);
    REQUIRE(std::abs(dec - d.h_m(1) * d.h_m(1)) <= 1e-12 * dec);
    // the renormalized ladder nb^m * h_{m-1}^2 * lt is finite and positive
    for (int m = 1; m <= 6; ++m) {
        const double ladder = d.r_m(m) * d.h_m(m - 1) * d.h_m(m - 1) * 1.0;
        REQUIRE(ladder > 0.0);
    }
}
