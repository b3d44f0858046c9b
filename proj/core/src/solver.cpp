#include "sppde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sppde {

namespace {

constexpr double kPivotFloor = 1e-300;

// Forward elimination / back substitution; cp is scratch of size n.
void thomas_kernel(std::span<const double> lower, std::span<const double> diag,
                   std::span<const double> upper, std::span<const double> rhs,
                   std::span<double> cp, std::span<double> x)
{
    const size_t n = diag.size();
    double piv = diag[0];
    if (std::abs(piv) < kPivotFloor)
        throw NumericalError("tridiagonal pivot breakdown at row 0");
    cp[0] = (n > 1 ? upper[0] : 0.0) / piv;
    x[0] = rhs[0] / piv;
    for (size_t i = 1; i < n; ++i) {
        piv = diag[i] - lower[i] * cp[i - 1];
        if (std::abs(piv) < kPivotFloor) {
            std::ostringstream msg;
            msg << "tridiagonal pivot breakdown at row " << i;
            throw NumericalError(msg.str());
        }
        cp[i] = (i + 1 < n ? upper[i] : 0.0) / piv;
        x[i] = (rhs[i] - lower[i] * x[i - 1]) / piv;
    }
    for (size_t i = n - 1; i-- > 0;)
        x[i] -= cp[i] * x[i + 1];
}

struct StepWorkspace {
    std::vector<double> lower, diag, upper, rhs, cp, x;

    void resize(size_t n)
    {
        lower.resize(n);
        diag.resize(n);
        upper.resize(n);
        rhs.resize(n);
        cp.resize(n);
        x.resize(n);
    }
};

// Assembles, negates the rows into M-matrix orientation, solves, installs
// boundary values.
void run_step(const ProblemSpec& spec, const SpatialMesh& mesh, const TagSelection& sel,
              double t_j, double t_next, double dt, std::span<const double> u_prev,
              std::span<double> u_next, StepWorkspace& ws, StepAuditSummary* audit)
{
    const AssembledStep st = assemble_step(spec, mesh, sel, t_j, t_next, dt, u_prev);
    const size_t m = st.rows.size();
    ws.resize(m);
    for (size_t k = 0; k < m; ++k) {
        const SchemeRow& row = st.rows[k];
        ws.lower[k] = -row.r_minus;
        ws.diag[k] = -row.r_center;
        ws.upper[k] = -row.r_plus;
        ws.rhs[k] = -row.rhs;
        if (audit) {
            const double row_sum = row.r_minus + row.r_center + row.r_plus;
            if (!(row.r_minus > 0.0 && row.r_plus > 0.0 && row_sum < 0.0))
                ++audit->sign_failures;
        }
    }
    thomas_kernel(ws.lower, ws.diag, ws.upper, ws.rhs, ws.cp, ws.x);

    u_next[0] = st.left_bc;
    for (size_t k = 0; k < m; ++k)
        u_next[k + 1] = ws.x[k];
    u_next[m + 1] = st.right_bc;
}

double sampled_sup_fn(const ScalarFn& fn, double lo, double hi, int intervals)
{
    double m = 0.0;
    for (int i = 0; i <= intervals; ++i)
        m = std::max(m, std::abs(fn(lo + (hi - lo) * i / intervals)));
    return m;
}

} // namespace

std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs)
{
    const size_t n = diag.size();
    if (n == 0 || lower.size() != n || upper.size() != n || rhs.size() != n)
        throw DomainError("tridiagonal solve needs four arrays of equal nonzero length");
    std::vector<double> cp(n), x(n);
    thomas_kernel(lower, diag, upper, rhs, cp, x);
    return x;
}

int SolutionField::total_sign_failures() const
{
    return std::accumulate(audits.begin(), audits.end(), 0,
                           [](int acc, const StepAuditSummary& s) { return acc + s.sign_failures; });
}

std::vector<double> step(const ProblemSpec& spec, const SpatialMesh& mesh,
                         const TagSelection& sel, double t_j, double t_next,
                         double dt, std::span<const double> u_prev)
{
    std::vector<double> u_next(static_cast<size_t>(mesh.n) + 1);
    StepWorkspace ws;
    try {
        run_step(spec, mesh, sel, t_j, t_next, dt, u_prev, u_next, ws, nullptr);
    } catch (const Error& e) {
        std::ostringstream msg;
        msg << "step to t=" << t_next << ": " << e.what();
        throw NumericalError(msg.str());
    }
    return u_next;
}

SolutionField solve_on(const ProblemSpec& spec, const SpatialMesh& mesh, const TimeGrid& grid)
{
    spec.validate();

    SolutionField field;
    field.mesh = mesh;
    field.grid = grid;

    const int n = mesh.n;
    const int m = grid.m();
    const Regime regime = classify_regime(spec);
    const CoeffNorms norms = estimate_coeff_norms(spec, mesh.nodes, grid.levels);
    const TagSelection sel = select_operators(spec, mesh, regime, grid.dt, norms);
    for (char g : sel.guard_ok)
        field.guard_failures += g ? 0 : 1;

    field.data.resize(static_cast<size_t>(m + 1) * static_cast<size_t>(n + 1));
    for (int i = 0; i <= n; ++i)
        field.u(i, 0) = spec.q(mesh.nodes[static_cast<size_t>(i)]);

    StepWorkspace ws;
    field.audits.reserve(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        StepAuditSummary summary;
        summary.step = j + 1;
        auto u_prev = std::span<const double>(field.data)
                          .subspan(static_cast<size_t>(j) * (n + 1), static_cast<size_t>(n) + 1);
        auto u_next = std::span<double>(field.data)
                          .subspan(static_cast<size_t>(j + 1) * (n + 1), static_cast<size_t>(n) + 1);
        try {
            run_step(spec, mesh, sel, grid.levels[static_cast<size_t>(j)],
                     grid.levels[static_cast<size_t>(j) + 1], grid.dt, u_prev, u_next, ws,
                     &summary);
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << "step to t=" << grid.levels[static_cast<size_t>(j) + 1] << ": " << e.what();
            throw NumericalError(msg.str());
        }
        field.audits.push_back(summary);
    }

    {
        AssembledStep first = assemble_step(spec, mesh, sel, grid.levels[0], grid.levels[1],
                                            grid.dt,
                                            std::span<const double>(field.data)
                                                .subspan(0, static_cast<size_t>(n) + 1));
        field.threshold_holds = audit_monotonicity(first, sel, spec, mesh, grid.dt, norms).threshold_holds;
    }

    // maximum-norm stability bound with sampled data norms
    const double data_sup = std::max({sampled_sup_fn(spec.p, 0.0, spec.T, 512),
                                      sampled_sup_fn(spec.r, 0.0, spec.T, 512),
                                      sampled_sup_fn(spec.q, 0.0, 1.0, 512)});
    const double f_sup = sampled_sup(spec.f, spec.d, spec.T);
    field.stability_bound = data_sup + f_sup / spec.stability_rate() + 1e-6;
    field.max_abs = 0.0;
    for (double v : field.data) {
        if (std::isnan(v))
            throw NumericalError("solution contains NaN");
        field.max_abs = std::max(field.max_abs, std::abs(v));
    }
    field.stability_ok = field.max_abs <= field.stability_bound;
    return field;
}

SolutionField solve(const ProblemSpec& spec, int n, int m)
{
    spec.validate();
    const Regime regime = classify_regime(spec);
    const LayerRates rates = compute_thetas(spec, regime);
    const TransitionWidths tau = compute_transition_points(spec, rates, n);
    const SpatialMesh mesh = build_spatial_mesh(spec, tau, n);
    const TimeGrid grid = build_time_grid(spec.T, m);
    return solve_on(spec, mesh, grid);
}

} // namespace sppde
