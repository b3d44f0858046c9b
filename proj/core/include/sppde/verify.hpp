#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sppde/solver.hpp"

namespace sppde {

struct SweepCell {
    double eps = 0.0, mu = 0.0;
    int n = 0, m = 0;
    std::optional<double> error;  ///< double-mesh or exact max-norm error
    std::optional<double> order;  ///< log2(E_N / E_2N); +inf sentinel when E_2N = 0
    std::string note;             ///< failure reason when error is absent
};

struct ConvergenceTable {
    std::string example;
    double rho = 0.0, alpha = 0.0;
    std::string timestamp; ///< metadata only, never serialized
    std::vector<SweepCell> rows; ///< sorted by (eps, mu, n)
};

/// max_{i,j} |fine(2i,2j) - coarse(i,j)|. The fine field must come from
/// bisect of the coarse grids; non-coincident nodes (beyond 1e-13) raise
/// NumericalError.
double double_mesh_error(const SolutionField& coarse, const SolutionField& fine);

/// log2(E_coarse / E_fine); +inf sentinel when E_fine = 0.
double convergence_order(double e_coarse, double e_fine);

/// Double-mesh sweep over the cross product of the lists, M = N per cell.
/// Cells run on up to `jobs` threads (0 = hardware concurrency); the table is
/// assembled in deterministic (eps, mu, n) order regardless.
ConvergenceTable run_sweep(const ProblemSpec& base,
                           std::vector<double> eps_list,
                           std::vector<double> mu_list,
                           std::vector<int> n_list, int jobs = 0);

/// Exact-error study for a manufactured problem, M = N per cell unless
/// m_fixed is positive.
ConvergenceTable mms_error_study(const MmsCase& mms, std::vector<int> n_list,
                                 int jobs = 0, int m_fixed = 0);

/// Exact max-norm errors for time-only refinement at fixed n.
std::vector<double> mms_temporal_errors(const MmsCase& mms, int n_fixed,
                                        const std::vector<int>& m_list);

/// Least-squares slope p of log2 E against -log2 N (so E ~ N^-p gives p).
double fitted_order(const std::vector<int>& ns, const std::vector<double>& errors);

/// Least-squares coefficient s of log E against log(N^-2 (ln N)^3); s is ~1
/// when the error tracks the theoretical rate.
double fitted_rate_vs_model(const std::vector<int>& ns, const std::vector<double>& errors);

} // namespace sppde
