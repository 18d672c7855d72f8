#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wgl/errors.hpp"
#include "wgl/graph.hpp"
#include "wgl/laplacian.hpp"
#include "wgl/params.hpp"

namespace wgl {

// ---------------------------------------------------------------------------
// Eigenvalue bookkeeping. All propagation happens in the dimensionless value
// lt ("lambda tilde"): the eigenvalue of the plain second-difference operator
// with Dirichlet ends, so lt in (0, 4) for the oscillatory regime and lt > 4
// for the real-root regime. Physical eigenvalues attach the mesh scaling only
// at the boundary of the module.
// ---------------------------------------------------------------------------

/// How a dimensionless eigenvalue converts to a physical one.
///   laplacian:  lambda = lt / h_m^2   (eigenvalue of the 1/h_m^2-scaled operator)
///   decimation: lambda = h_{m-1}^2 * lt (the normalization native to the
///               two-level eigenvalue recurrences)
enum class EigenvalueScaling { laplacian, decimation };

inline double physical_eigenvalue(double lambda_tilde, int level, const DerivedConstants& d,
                                  EigenvalueScaling scaling) {
    if (scaling == EigenvalueScaling::laplacian) {
        const double hm = d.h_m(level);
        return lambda_tilde / (hm * hm);
    }
    const double hp = d.h_m(level - 1);
    return hp * hp * lambda_tilde;
}

/// Decreasing bijection (4, inf) -> (0, 1): the modulus of the contracting
/// characteristic root r^2 + (lt - 2) r + 1 = 0. Evaluated in the
/// product-stable form 2 / ((x-2) + sqrt((x-2)^2 - 4)).
inline double phi_forward(double x) {
    if (!(x > 4.0))
        throw param_error("spectral: phi is defined for arguments > 4 (branch cut at 4), got " +
                          std::to_string(x));
    const double s = x - 2.0;
    return 2.0 / (s + std::sqrt(s * s - 4.0));
}

/// Inverse of phi_forward: y -> (y + 1)^2 / y, mapping (0, 1) onto (4, inf).
inline double phi_inverse(double y) {
    if (!(y > 0.0) || !(y < 1.0))
        throw param_error("spectral: phi inverse needs an argument in (0, 1), got " +
                          std::to_string(y));
    return (y + 1.0) * (y + 1.0) / y;
}

inline void check_lambda_tilde_domain(double lt) {
    if (!(lt > 0.0))
        throw param_error("spectral: dimensionless eigenvalue must be positive, got " +
                          std::to_string(lt));
    if (std::abs(lt - 4.0) <= 1e-12 || lt == 0.0)
        throw param_error("spectral: degenerate discriminant (double characteristic root) at "
                          "lambda_tilde = " + std::to_string(lt));
}

/// One refinement step of the eigenvalue map (principal branch).
/// Real-root regime lt > 4:       lt' = phi^{-1}(phi(lt)^{1/nb});
/// oscillatory regime 0 < lt < 4: lt = 2 - 2 cos(theta) maps to
///                                lt' = 2 - 2 cos(theta / nb).
inline double decimate_forward_value(double lt, int nb) {
    check_lambda_tilde_domain(lt);
    if (lt > 4.0) return phi_inverse(std::pow(phi_forward(lt), 1.0 / nb));
    const double theta = std::acos(1.0 - lt / 2.0);
    return 2.0 - 2.0 * std::cos(theta / nb);
}

/// Every level-(m+1) value whose nb-fold phase multiplication recovers the
/// given oscillatory value: phases (s*theta + 2 pi j)/nb inside (0, pi) for
/// both signs s. Returns exactly nb values, ascending; index 0 is the
/// principal branch.
inline std::vector<double> inverse_branches(double lt, int nb) {
    if (!(lt > 0.0) || !(lt < 4.0))
        throw param_error("spectral: branch enumeration needs lambda_tilde in (0, 4), got " +
                          std::to_string(lt));
    const double pi = two_pi / 2.0;
    const double theta = std::acos(1.0 - lt / 2.0);
    std::vector<double> phases;
    for (int sign : {+1, -1}) {
        for (int j = -nb; j <= nb; ++j) {
            const double t = (sign * theta + two_pi * j) / nb;
            if (t > 0.0 && t < pi) phases.push_back(t);
        }
    }
    std::sort(phases.begin(), phases.end());
    phases.erase(std::unique(phases.begin(), phases.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                 phases.end());
    std::vector<double> out;
    out.reserve(phases.size());
    for (double t : phases) out.push_back(2.0 - 2.0 * std::cos(t));
    std::sort(out.begin(), out.end());
    return out;
}

/// Snapshot of the decimation data attached to one dimensionless eigenvalue:
/// characteristic roots, discriminant, branch bookkeeping.
/// Root conventions: root1 * root2 = 1 and root1 + root2 = 2 - lt; for
/// 0 < lt < 4 the roots are conjugate on the unit circle.
struct DecimationState {
    int level = 0;
    double lambda_tilde = 0.0;
    int branch_sign = +1;  // epsilon picking the contracting real root
    int phase_branch = 0;  // j in the oscillatory branch set (0 = principal)
    std::complex<double> root1;
    std::complex<double> root2;
    double discriminant = 0.0;

    double lambda_physical(const DerivedConstants& d,
                           EigenvalueScaling scaling = EigenvalueScaling::laplacian) const {
        return physical_eigenvalue(lambda_tilde, level, d, scaling);
    }
};

inline DecimationState make_decimation_state(double lt, int level = 0, int phase_branch = 0) {
    check_lambda_tilde_domain(lt);
    DecimationState s;
    s.level = level;
    s.lambda_tilde = lt;
    s.phase_branch = phase_branch;
    s.discriminant = (lt - 2.0) * (lt - 2.0) - 4.0;
    const std::complex<double> omega = std::sqrt(std::complex<double>(s.discriminant, 0.0));
    s.root1 = (2.0 - lt - omega) / 2.0;
    s.root2 = (2.0 - lt + omega) / 2.0;
    return s;
}

/// Advance a state one level along the principal branch.
inline DecimationState decimate_forward(const DecimationState& s, int nb) {
    return make_decimation_state(decimate_forward_value(s.lambda_tilde, nb), s.level + 1);
}

// ---------------------------------------------------------------------------
// Direct spectrum (oracle side of the decimation machinery) and eigenfunction
// extension (the recurrence side).
// ---------------------------------------------------------------------------

/// An eigenpair of the interior operator at one level. The eigenfunction is
/// stored full-size and vanishes on the boundary set. `residual` bounds
/// ||(-Delta_m) u - (lt/h_m^2) u||_inf.
struct EigenPair {
    int level = 0;
    double lambda_tilde = 0.0;
    int segment = 0; // which of the nb-1 decoupled segments carries it
    VertexFunction eigenfunction;
    double residual = 0.0;
};

inline double eigen_residual(const GraphLevel& g, const VertexFunction& u, double lt) {
    const DerivedConstants d = derived_constants(g.params());
    const double hm = d.h_m(g.level());
    const std::int64_t seg = ipow(g.params().nb, g.level());
    double worst = 0.0;
    for (std::int64_t k = 1; k < g.vertex_count() - 1; ++k) {
        if (k % seg == 0) continue;
        const std::size_t i = static_cast<std::size_t>(k);
        const double r = 2.0 * u.values[i] - u.values[i - 1] - u.values[i + 1] -
                         lt * u.values[i];
        worst = std::max(worst, std::abs(r));
    }
    return worst / (hm * hm);
}

/// Full Dirichlet spectrum of the interior operator, one decoupled segment at
/// a time. Pairs are sorted by (lambda_tilde, segment). The interior size is
/// capped by `budget`.
inline std::vector<EigenPair> direct_spectrum(const GraphLevel& g, std::int64_t budget = 20000) {
    if (g.level() < 1) throw param_error("spectral: level 0 has no interior");
    if (g.interior_count() > budget)
        throw budget_error("spectral: interior size " + std::to_string(g.interior_count()) +
                           " exceeds the eigensolver budget " + std::to_string(budget));
    const int nb = g.params().nb;
    const std::int64_t seg_len = ipow(nb, g.level()); // vertices per segment span
    const int n = static_cast<int>(seg_len - 1);      // interior points per segment

    std::vector<EigenPair> out;
    out.reserve(static_cast<std::size_t>(g.interior_count()));
    Eigen::VectorXd diag = Eigen::VectorXd::Constant(n, 2.0);
    Eigen::VectorXd sub = Eigen::VectorXd::Constant(std::max(n - 1, 0), -1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw consistency_error("spectral: tridiagonal eigensolver failed");

    for (int s = 0; s < nb - 1; ++s) {
        const std::int64_t base = static_cast<std::int64_t>(s) * seg_len;
        for (int j = 0; j < n; ++j) {
            EigenPair pair;
            pair.level = g.level();
            pair.segment = s;
            pair.lambda_tilde = solver.eigenvalues()[j];
            pair.eigenfunction = VertexFunction{
                g.level(), std::vector<double>(static_cast<std::size_t>(g.vertex_count()), 0.0)};
            for (int i = 0; i < n; ++i)
                pair.eigenfunction.values[static_cast<std::size_t>(base + 1 + i)] =
                    solver.eigenvectors()(i, j);
            pair.residual = eigen_residual(g, pair.eigenfunction, pair.lambda_tilde);
            out.push_back(std::move(pair));
        }
    }
    std::sort(out.begin(), out.end(), [](const EigenPair& a, const EigenPair& b) {
        if (a.lambda_tilde != b.lambda_tilde) return a.lambda_tilde < b.lambda_tilde;
        return a.segment < b.segment;
    });
    return out;
}

/// Result of extending an eigenfunction one level down the decimation.
/// new_point_residual covers the freshly inserted points, where the
/// characteristic recurrence enforces the eigen-equation; it must vanish up
/// to rounding. old_point_residual covers the inherited interior points,
/// where the eigen-equation holds only when the fine eigenvalue is an
/// admissible branch of the coarse one — the diagnostic that exposes
/// forbidden eigenvalues. Both are relative to the sup norm of the input.
struct ExtensionResult {
    EigenPair pair;
    double new_point_residual = 0.0;
    double old_point_residual = 0.0;
};

/// Extend a level-(m-1) eigenfunction (vanishing on the boundary set) to
/// level m for the fine eigenvalue `lt_fine`. On each refined edge the values
/// follow alpha r1^i + beta r2^i with (alpha, beta) pinned by the two edge
/// endpoints; the endpoint system is singular exactly when r1^nb = r2^nb
/// (forbidden eigenvalue).
inline ExtensionResult extend_eigenfunction(const FractalParams& p, const VertexFunction& u,
                                            double lt_fine) {
    p.validate();
    check_lambda_tilde_domain(lt_fine);
    const int nb = p.nb;
    const int m = u.level + 1;
    const std::int64_t coarse_n = (nb - 1) * ipow(nb, u.level) + 1;
    if (static_cast<std::int64_t>(u.values.size()) != coarse_n)
        throw shape_error("spectral: vertex function does not match its declared level");

    double sup = 0.0;
    for (double v : u.values) sup = std::max(sup, std::abs(v));
    const std::int64_t coarse_seg = ipow(nb, u.level);
    for (int i = 0; i < nb; ++i) {
        const double bv = u.values[static_cast<std::size_t>(i * coarse_seg)];
        if (std::abs(bv) > 1e-12 * std::max(sup, 1.0))
            throw param_error("spectral: eigenfunction must vanish on the boundary set");
    }

    const DecimationState st = make_decimation_state(lt_fine, m);
    const std::complex<double> r1 = st.root1;
    const std::complex<double> r2 = st.root2;
    const std::complex<double> r1n = std::pow(r1, nb);
    const std::complex<double> r2n = std::pow(r2, nb);
    const double denom_scale = std::max({std::abs(r1n), std::abs(r2n), 1.0});
    if (std::abs(r2n - r1n) <= 1e-10 * denom_scale)
        throw param_error("spectral: forbidden eigenvalue, the endpoint system r1^nb = r2^nb "
                          "is singular at lambda_tilde = " + std::to_string(lt_fine));

    const std::int64_t fine_n = (coarse_n - 1) * nb + 1;
    VertexFunction fine{m, std::vector<double>(static_cast<std::size_t>(fine_n), 0.0)};
    for (std::int64_t e = 0; e + 1 < coarse_n; ++e) {
        const double a = u.values[static_cast<std::size_t>(e)];
        const double b = u.values[static_cast<std::size_t>(e + 1)];
        // alpha + beta = a,  alpha r1^nb + beta r2^nb = b
        const std::complex<double> beta = (b - a * r1n) / (r2n - r1n);
        const std::complex<double> alpha = std::complex<double>(a, 0.0) - beta;
        fine.values[static_cast<std::size_t>(e * nb)] = a;
        std::complex<double> p1 = r1;
        std::complex<double> p2 = r2;
        for (int i = 1; i < nb; ++i) {
            fine.values[static_cast<std::size_t>(e * nb + i)] = (alpha * p1 + beta * p2).real();
            p1 *= r1;
            p2 *= r2;
        }
    }
    fine.values.back() = u.values.back();

    const std::int64_t fine_seg = ipow(nb, m);
    double worst_new = 0.0;
    double worst_old = 0.0;
    for (std::int64_t k = 1; k < fine_n - 1; ++k) {
        if (k % fine_seg == 0) continue;
        const std::size_t i = static_cast<std::size_t>(k);
        const double r = 2.0 * fine.values[i] - fine.values[i - 1] - fine.values[i + 1] -
                         lt_fine * fine.values[i];
        if (k % nb == 0)
            worst_old = std::max(worst_old, std::abs(r));
        else
            worst_new = std::max(worst_new, std::abs(r));
    }
    const double norm = sup > 0.0 ? sup : 1.0;

    ExtensionResult res;
    res.pair.level = m;
    res.pair.lambda_tilde = lt_fine;
    res.pair.segment = -1;
    res.pair.eigenfunction = std::move(fine);
    const DerivedConstants d = derived_constants(p);
    const double hm = d.h_m(m);
    res.pair.residual = std::max(worst_new, worst_old) / (hm * hm);
    res.new_point_residual = worst_new / norm;
    res.old_point_residual = worst_old / norm;
    return res;
}

} // namespace wgl
