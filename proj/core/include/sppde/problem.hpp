#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sppde/errors.hpp"

namespace sppde {

/// Scalar coefficient or data function of space and time.
using ScalarField = std::function<double(double x, double t)>;
/// Scalar function of a single variable (boundary and initial traces).
using ScalarFn = std::function<double(double)>;

enum class Side { Left, Right };

/// A coefficient with independent branches on [0,d) and (d,1].
///
/// Branch evaluation at x = d yields the one-sided limit; `at` refuses x = d
/// so call sites must commit to a side explicitly.
class PiecewiseCoefficient {
public:
    PiecewiseCoefficient() = default;
    PiecewiseCoefficient(ScalarField left, ScalarField right);

    /// Continuous coefficient: both branches share one function.
    static PiecewiseCoefficient continuous(ScalarField w);

    double left(double x, double t) const { return left_(x, t); }
    double right(double x, double t) const { return right_(x, t); }
    double side(Side s, double x, double t) const
    {
        return s == Side::Left ? left_(x, t) : right_(x, t);
    }
    /// Dispatches on x <=> d; throws DomainError at x == d.
    double at(double x, double t, double d) const;

    bool valid() const { return static_cast<bool>(left_) && static_cast<bool>(right_); }

private:
    ScalarField left_, right_;
};

/// Continuous problem data for
///     eps u_xx + mu a u_x - b u - u_t = f   on (0,1) x (0,T],
/// with a and f discontinuous across x = d and
///     u(0,t) = p(t),  u(1,t) = r(t),  u(x,0) = q(x).
struct ProblemSpec {
    std::string name;
    PiecewiseCoefficient a; ///< convection; a <= -alpha1 on [0,d), a >= alpha2 on (d,1]
    PiecewiseCoefficient b; ///< reaction, continuous, b >= beta > 0
    PiecewiseCoefficient f; ///< source
    ScalarFn p, r;          ///< boundary traces at x = 0 and x = 1
    ScalarFn q;             ///< initial trace at t = 0
    double eps = 1.0;
    double mu = 1.0;
    double d = 0.5;
    double T = 1.0;
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    double beta = 1.0;
    double rho = 1.0;

    double alpha() const { return alpha1 < alpha2 ? alpha1 : alpha2; }

    /// Rate in the maximum-norm stability bound: min(alpha1/d, alpha2/(1-d)).
    double stability_rate() const;

    /// Parameter ranges, sampled sign conditions, corner compatibility.
    /// Throws DomainError on the first violation.
    void validate() const;
};

enum class Regime { EpsDominant, MuDominant };

/// EpsDominant iff sqrt(alpha) * mu <= sqrt(rho * eps); ties classify as EpsDominant.
Regime classify_regime(const ProblemSpec& spec);

/// Built-in problem registry. Throws ConfigError for unknown names, listing
/// the valid identifiers.
ProblemSpec builtin_example(const std::string& name);
const std::vector<std::string>& builtin_example_names();

/// Analytic pieces of a manufactured solution; derivatives are supplied by
/// the caller (x-derivatives to order 2, t-derivative to order 1).
struct ManufacturedSolution {
    ScalarField u, u_x, u_xx, u_t;
};

/// Derives f, p, r, q from u so that u solves the equation exactly with the
/// skeleton's coefficients and parameters. Rejects solutions whose traced
/// corner data is inconsistent beyond 1e-12.
ProblemSpec mms_problem(const ManufacturedSolution& ms, const ProblemSpec& skeleton);

struct MmsCase {
    ProblemSpec spec;
    ScalarField u_exact;
};

/// Manufactured-solution registry entries ("mms-smooth", "mms-layer").
MmsCase builtin_mms(const std::string& name);
MmsCase builtin_mms(const std::string& name, double eps, double mu);

/// Sampled sup-norm estimates used by operator-selection guards.
struct CoeffNorms {
    double a = 0.0, b = 0.0;
};

/// Discrete maxima of |a|, |b| over the tensor grid (mesh nodes x time levels)
/// plus fixed uniform samples, one of them 4x refined.
CoeffNorms estimate_coeff_norms(const ProblemSpec& spec,
                                const std::vector<double>& nodes,
                                const std::vector<double>& levels);

/// max |w| over fixed per-side tensor grids (base and 4x refined).
double sampled_sup(const PiecewiseCoefficient& w, double d, double T);

/// Default analysis constant: min(1, beta / ||a||) with the sampled norm.
double default_rho(double beta, const PiecewiseCoefficient& a, double d, double T);

} // namespace sppde
