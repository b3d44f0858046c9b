#pragma once

#include <span>
#include <vector>

#include "sppde/mesh.hpp"
#include "sppde/scheme.hpp"

namespace sppde {

/// Thomas algorithm without pivoting. lower[0] and upper[n-1] are ignored.
/// Throws NumericalError when a forward-elimination pivot falls below 1e-300
/// in magnitude.
std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs);

struct StepAuditSummary {
    int step = 0;           ///< time level being produced (j+1)
    int sign_failures = 0;  ///< rows failing r_minus > 0, r_plus > 0, row_sum < 0
};

/// Space-time solution samples with the grids that produced them.
class SolutionField {
public:
    SpatialMesh mesh;
    TimeGrid grid;
    std::vector<double> data; ///< (M+1) levels x (N+1) nodes, time level major

    double u(int i, int j) const
    {
        return data[static_cast<size_t>(j) * (mesh.n + 1) + static_cast<size_t>(i)];
    }
    double& u(int i, int j)
    {
        return data[static_cast<size_t>(j) * (mesh.n + 1) + static_cast<size_t>(i)];
    }

    // diagnostics
    std::vector<StepAuditSummary> audits;
    int guard_failures = 0;
    bool threshold_holds = false;
    bool stability_ok = true;
    double stability_bound = 0.0;
    double max_abs = 0.0;

    int total_sign_failures() const;
    bool has_warnings() const { return !stability_ok || guard_failures > 0 || total_sign_failures() > 0; }
};

/// Advances one Crank-Nicolson level: assembles via the tag selection, solves
/// the negated tridiagonal system, installs p(t_next), r(t_next). Errors are
/// rethrown tagged with the time level.
std::vector<double> step(const ProblemSpec& spec, const SpatialMesh& mesh,
                         const TagSelection& sel, double t_j, double t_next,
                         double dt, std::span<const double> u_prev);

/// Full solve on a prebuilt mesh and time grid (used for nested refinements).
SolutionField solve_on(const ProblemSpec& spec, const SpatialMesh& mesh,
                       const TimeGrid& grid);

/// Classifies the regime, builds the layer-adapted mesh and uniform time grid,
/// and marches M steps. n must be divisible by 8 (and >= 16), m >= 1.
SolutionField solve(const ProblemSpec& spec, int n, int m);

} // namespace sppde
