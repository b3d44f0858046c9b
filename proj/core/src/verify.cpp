#include "sppde/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <thread>

namespace sppde {

namespace {

std::string now_iso8601()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void check_nested(const SolutionField& coarse, const SolutionField& fine)
{
    if (fine.mesh.n != 2 * coarse.mesh.n || fine.grid.m() != 2 * coarse.grid.m())
        throw NumericalError("double-mesh comparison needs the bisected grids");
    for (int i = 0; i <= coarse.mesh.n; ++i) {
        if (std::abs(fine.mesh.nodes[static_cast<size_t>(2 * i)] -
                     coarse.mesh.nodes[static_cast<size_t>(i)]) > 1e-13)
            throw NumericalError("fine mesh nodes do not coincide with coarse nodes");
    }
    for (int j = 0; j <= coarse.grid.m(); ++j) {
        if (std::abs(fine.grid.levels[static_cast<size_t>(2 * j)] -
                     coarse.grid.levels[static_cast<size_t>(j)]) > 1e-13)
            throw NumericalError("fine time levels do not coincide with coarse levels");
    }
}

// runs cells on a small pool; results land at fixed indices so output order
// never depends on scheduling
template <typename Fn>
void run_cells(size_t count, int jobs, Fn&& body)
{
    int workers = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1)
        workers = 1;
    workers = std::min<int>(workers, static_cast<int>(count));
    if (workers <= 1) {
        for (size_t c = 0; c < count; ++c)
            body(c);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (size_t c = next.fetch_add(1); c < count; c = next.fetch_add(1))
                body(c);
        });
    }
    for (auto& th : pool)
        th.join();
}

void attach_orders(std::vector<SweepCell>& rows)
{
    // R only where the next listed N within the same (eps, mu) block doubles
    for (size_t k = 0; k + 1 < rows.size(); ++k) {
        SweepCell& cur = rows[k];
        const SweepCell& nxt = rows[k + 1];
        if (nxt.eps == cur.eps && nxt.mu == cur.mu && nxt.n == 2 * cur.n && cur.error &&
            nxt.error)
            cur.order = convergence_order(*cur.error, *nxt.error);
    }
}

} // namespace

double double_mesh_error(const SolutionField& coarse, const SolutionField& fine)
{
    check_nested(coarse, fine);
    double err = 0.0;
    for (int j = 0; j <= coarse.grid.m(); ++j)
        for (int i = 0; i <= coarse.mesh.n; ++i)
            err = std::max(err, std::abs(fine.u(2 * i, 2 * j) - coarse.u(i, j)));
    return err;
}

double convergence_order(double e_coarse, double e_fine)
{
    if (e_fine == 0.0)
        return std::numeric_limits<double>::infinity();
    return std::log2(e_coarse / e_fine);
}

ConvergenceTable run_sweep(const ProblemSpec& base, std::vector<double> eps_list,
                           std::vector<double> mu_list, std::vector<int> n_list, int jobs)
{
    if (eps_list.empty() || mu_list.empty() || n_list.empty())
        throw DomainError("sweep needs nonempty eps, mu and N lists");
    std::sort(eps_list.begin(), eps_list.end());
    std::sort(mu_list.begin(), mu_list.end());
    std::sort(n_list.begin(), n_list.end());

    ConvergenceTable table;
    table.example = base.name;
    table.rho = base.rho;
    table.alpha = base.alpha();
    table.timestamp = now_iso8601();
    for (double eps : eps_list)
        for (double mu : mu_list)
            for (int n : n_list) {
                SweepCell cell;
                cell.eps = eps;
                cell.mu = mu;
                cell.n = n;
                cell.m = n;
                table.rows.push_back(cell);
            }

    run_cells(table.rows.size(), jobs, [&](size_t c) {
        SweepCell& cell = table.rows[c];
        ProblemSpec spec = base;
        spec.eps = cell.eps;
        spec.mu = cell.mu;
        try {
            const SolutionField coarse = solve(spec, cell.n, cell.m);
            const auto [fine_mesh, fine_grid] = bisect(coarse.mesh, coarse.grid);
            const SolutionField fine = solve_on(spec, fine_mesh, fine_grid);
            cell.error = double_mesh_error(coarse, fine);
        } catch (const std::exception& e) {
            cell.note = e.what();
        }
    });

    attach_orders(table.rows);
    return table;
}

ConvergenceTable mms_error_study(const MmsCase& mms, std::vector<int> n_list, int jobs,
                                 int m_fixed)
{
    if (n_list.empty())
        throw DomainError("study needs a nonempty N list");
    std::sort(n_list.begin(), n_list.end());

    ConvergenceTable table;
    table.example = mms.spec.name;
    table.rho = mms.spec.rho;
    table.alpha = mms.spec.alpha();
    table.timestamp = now_iso8601();
    for (int n : n_list) {
        SweepCell cell;
        cell.eps = mms.spec.eps;
        cell.mu = mms.spec.mu;
        cell.n = n;
        cell.m = m_fixed > 0 ? m_fixed : n;
        table.rows.push_back(cell);
    }

    run_cells(table.rows.size(), jobs, [&](size_t c) {
        SweepCell& cell = table.rows[c];
        try {
            const SolutionField field = solve(mms.spec, cell.n, cell.m);
            double err = 0.0;
            for (int j = 0; j <= field.grid.m(); ++j)
                for (int i = 0; i <= field.mesh.n; ++i)
                    err = std::max(err, std::abs(field.u(i, j) -
                                                 mms.u_exact(field.mesh.nodes[static_cast<size_t>(i)],
                                                             field.grid.levels[static_cast<size_t>(j)])));
            cell.error = err;
        } catch (const std::exception& e) {
            cell.note = e.what();
        }
    });

    // exact-error orders are attached even under fixed M (spatial refinement)
    attach_orders(table.rows);
    return table;
}

std::vector<double> mms_temporal_errors(const MmsCase& mms, int n_fixed,
                                        const std::vector<int>& m_list)
{
    std::vector<double> errors;
    errors.reserve(m_list.size());
    for (int m : m_list) {
        const SolutionField field = solve(mms.spec, n_fixed, m);
        double err = 0.0;
        for (int j = 0; j <= field.grid.m(); ++j)
            for (int i = 0; i <= field.mesh.n; ++i)
                err = std::max(err, std::abs(field.u(i, j) -
                                             mms.u_exact(field.mesh.nodes[static_cast<size_t>(i)],
                                                         field.grid.levels[static_cast<size_t>(j)])));
        errors.push_back(err);
    }
    return errors;
}

namespace {

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys)
{
    const size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

double fitted_order(const std::vector<int>& ns, const std::vector<double>& errors)
{
    if (ns.size() != errors.size() || ns.size() < 2)
        throw DomainError("order fit needs matching lists with >= 2 points");
    std::vector<double> xs, ys;
    for (size_t i = 0; i < ns.size(); ++i) {
        if (!(errors[i] > 0.0))
            throw DomainError("order fit needs positive errors");
        xs.push_back(std::log2(static_cast<double>(ns[i])));
        ys.push_back(std::log2(errors[i]));
    }
    return -ls_slope(xs, ys);
}

double fitted_rate_vs_model(const std::vector<int>& ns, const std::vector<double>& errors)
{
    if (ns.size() != errors.size() || ns.size() < 3)
        throw DomainError("model fit needs matching lists with >= 3 points");
    std::vector<double> xs, ys;
    for (size_t i = 0; i < ns.size(); ++i) {
        if (!(errors[i] > 0.0))
            throw DomainError("model fit needs positive errors");
        const double n = static_cast<double>(ns[i]);
        const double ln = std::log(n);
        xs.push_back(std::log(ln * ln * ln / (n * n)));
        ys.push_back(std::log(errors[i]));
    }
    return ls_slope(xs, ys);
}

} // namespace sppde
