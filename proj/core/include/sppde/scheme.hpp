#pragma once

#include <array>
#include <span>
#include <vector>

#include "sppde/mesh.hpp"
#include "sppde/problem.hpp"

namespace sppde {

enum class OperatorTag : unsigned char { Central, MidpointUpwind, Upwind, Discontinuity };

const char* tag_name(OperatorTag tag);

/// One tridiagonal row in the sign convention
///     r_minus U_{i-1} + r_center U_i + r_plus U_{i+1} = rhs,
/// i.e. exactly as the difference operators are defined (negative-definite
/// center). The linear solver negates uniformly.
struct SchemeRow {
    double r_minus = 0.0, r_center = 0.0, r_plus = 0.0;
    double rhs = 0.0;
    OperatorTag tag = OperatorTag::Central;
};

/// Per-node operator choice plus guard bookkeeping. guard_ok[i] == 0 marks a
/// node whose prescribed guard failed: either the fallback chain replaced the
/// operator or (at the discontinuity) the row was kept with a warning.
struct TagSelection {
    std::vector<OperatorTag> tags; ///< size n+1; entries 1..n-1 meaningful
    std::vector<char> guard_ok;    ///< size n+1
};

/// Dispatch table: central in layer regions under mu ||a|| h < 2 eps,
/// midpoint-upwind/upwind dichotomy in outer regions and at transition nodes,
/// the transformed five-point row at x = d. Fallback chain for a failed
/// central guard: midpoint-upwind, then upwind.
TagSelection select_operators(const ProblemSpec& spec, const SpatialMesh& mesh,
                              Regime regime, double dt, const CoeffNorms& norms);

// Row constructors. All coefficients are evaluated analytically at t_mid =
// t_j + dt/2; u_prev is the full previous level including boundary entries.

SchemeRow central_row(const ProblemSpec& spec, const SpatialMesh& mesh, int i,
                      double t_mid, double dt, std::span<const double> u_prev);

SchemeRow midpoint_row(const ProblemSpec& spec, const SpatialMesh& mesh, int i,
                       double t_mid, double dt, std::span<const double> u_prev);

SchemeRow upwind_row(const ProblemSpec& spec, const SpatialMesh& mesh, int i,
                     double t_mid, double dt, std::span<const double> u_prev);

/// Closed-form tridiagonal row at x_{N/2} = d obtained by eliminating
/// U_{N/2-2} and U_{N/2+2} from the five-point jump condition via the
/// flanking central rows.
SchemeRow discontinuity_row(const ProblemSpec& spec, const SpatialMesh& mesh,
                            double t_mid, double dt, std::span<const double> u_prev);

/// Raw five-point jump condition at x_{N/2}: coefficients of
/// U_{N/2-2} .. U_{N/2+2} in the equation sum(w_k U) = 0. Used by the
/// elimination oracle and tests only.
struct FivePointStencil {
    std::array<double, 5> w{};
};

FivePointStencil five_point_jump_stencil(const SpatialMesh& mesh);

/// One implicit step's interior rows with boundary values folded into the
/// first and last right-hand sides.
struct AssembledStep {
    std::vector<SchemeRow> rows; ///< n-1 rows, index k is node k+1
    double left_bc = 0.0, right_bc = 0.0;
    std::vector<OperatorTag> tags;
};

AssembledStep assemble_step(const ProblemSpec& spec, const SpatialMesh& mesh,
                            const TagSelection& sel, double t_j, double t_next,
                            double dt, std::span<const double> u_prev);

struct RowAudit {
    int i = 0;
    double x = 0.0;
    OperatorTag tag = OperatorTag::Central;
    double r_minus = 0.0, r_center = 0.0, r_plus = 0.0, row_sum = 0.0;
    bool guard_ok = true;
    bool signs_ok = true; ///< r_minus > 0, r_plus > 0, row_sum < 0
};

struct AuditReport {
    bool threshold_holds = false; ///< N / ln N > 16 max(||b||/alpha, (||b||+2/dt)/(alpha rho))
    double threshold_lhs = 0.0, threshold_rhs = 0.0;
    std::vector<RowAudit> rows;
    int sign_failures = 0;
    int guard_failures = 0;

    bool all_signs_ok() const { return sign_failures == 0; }
};

AuditReport audit_monotonicity(const AssembledStep& step, const TagSelection& sel,
                               const ProblemSpec& spec, const SpatialMesh& mesh,
                               double dt, const CoeffNorms& norms);

/// Convenience: builds the grids for (n, m), assembles the first step from
/// the initial data and audits it.
AuditReport audit_problem(const ProblemSpec& spec, int n, int m);

} // namespace sppde
