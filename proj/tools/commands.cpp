#include <cstdio>
#include <fstream>
#include <iostream>

#include "config.hpp"

#include "sppde/csv.hpp"
#include "sppde/scheme.hpp"
#include "sppde/solver.hpp"
#include "sppde/verify.hpp"

namespace sppde::cli {

namespace {

bool is_mms_name(const std::string& name)
{
    return name.rfind("mms-", 0) == 0;
}

ProblemSpec make_spec(const RunConfig& cfg)
{
    ProblemSpec spec;
    if (is_mms_name(cfg.example)) {
        // manufactured sources depend on eps/mu, so overrides regenerate f
        const MmsCase defaults = builtin_mms(cfg.example);
        const double eps = cfg.eps.empty() ? defaults.spec.eps : cfg.eps.front();
        const double mu = cfg.mu.empty() ? defaults.spec.mu : cfg.mu.front();
        spec = builtin_mms(cfg.example, eps, mu).spec;
    } else {
        spec = builtin_example(cfg.example);
        if (!cfg.eps.empty())
            spec.eps = cfg.eps.front();
        if (!cfg.mu.empty())
            spec.mu = cfg.mu.front();
    }
    if (cfg.rho)
        spec.rho = *cfg.rho;
    return spec;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    body(out);
    out.flush();
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

std::string audit_path_for(const std::string& surface_path)
{
    const auto dot = surface_path.find_last_of('.');
    const auto slash = surface_path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return surface_path + ".audit.csv";
    return surface_path.substr(0, dot) + ".audit.csv";
}

SpatialMesh make_mesh(const ProblemSpec& spec, int n)
{
    const Regime regime = classify_regime(spec);
    const LayerRates rates = compute_thetas(spec, regime);
    const TransitionWidths tau = compute_transition_points(spec, rates, n);
    return build_spatial_mesh(spec, tau, n);
}

int cmd_solve(const RunConfig& cfg)
{
    const ProblemSpec spec = make_spec(cfg);
    const int n = cfg.n.front();
    const int m = cfg.m.value_or(n);

    const SolutionField field = solve(spec, n, m);
    write_file(cfg.out, [&](std::ostream& os) { write_surface_csv(os, field); });
    const AuditReport report = audit_problem(spec, n, m);
    const std::string audit_path = audit_path_for(cfg.out);
    write_file(audit_path, [&](std::ostream& os) { write_audit_csv(os, report); });
    std::cout << "wrote " << cfg.out << " and " << audit_path << "\n";

    bool warned = false;
    if (!field.stability_ok) {
        std::cerr << "sppde: warning: stability bound exceeded: max|u|="
                  << format_double(field.max_abs) << " > " << format_double(field.stability_bound)
                  << "\n";
        warned = true;
    }
    if (field.guard_failures > 0) {
        std::cerr << "sppde: warning: " << field.guard_failures
                  << " nodes outside the monotone guard envelope\n";
        warned = true;
    }
    const int sign_failures = field.total_sign_failures();
    if (sign_failures > 0) {
        std::cerr << "sppde: warning: " << sign_failures
                  << " row sign-check failures across all steps\n";
        warned = true;
    }
    if (warned && cfg.strict_audit)
        throw NumericalError("monotonicity warnings escalated by --strict-audit");
    return 0;
}

int cmd_sweep(const RunConfig& cfg)
{
    const ProblemSpec base = make_spec(cfg);
    std::vector<double> eps_list = cfg.eps.empty() ? std::vector<double>{base.eps} : cfg.eps;
    std::vector<double> mu_list = cfg.mu.empty() ? std::vector<double>{base.mu} : cfg.mu;
    if (is_mms_name(cfg.example) && (eps_list.size() > 1 || mu_list.size() > 1))
        throw ConfigError("manufactured problems sweep over N only; give single eps/mu");

    const ConvergenceTable table = run_sweep(base, eps_list, mu_list, cfg.n, cfg.jobs);
    write_file(cfg.out, [&](std::ostream& os) { write_table_csv(os, table); });
    std::cout << "wrote " << cfg.out << " (" << table.rows.size() << " cells)\n";

    int failed = 0;
    for (const auto& cell : table.rows)
        if (!cell.error) {
            std::cerr << "sppde: warning: cell eps=" << format_double(cell.eps)
                      << " mu=" << format_double(cell.mu) << " N=" << cell.n << " failed: "
                      << cell.note << "\n";
            ++failed;
        }
    if (failed && cfg.strict_audit)
        throw NumericalError(std::to_string(failed) + " sweep cells failed");
    return 0;
}

int cmd_mms(const RunConfig& cfg)
{
    if (!is_mms_name(cfg.example))
        throw ConfigError("the mms command needs a manufactured problem "
                          "(mms-smooth or mms-layer)");
    const MmsCase defaults = builtin_mms(cfg.example);
    const double eps = cfg.eps.empty() ? defaults.spec.eps : cfg.eps.front();
    const double mu = cfg.mu.empty() ? defaults.spec.mu : cfg.mu.front();
    MmsCase mms = builtin_mms(cfg.example, eps, mu);
    if (cfg.rho)
        mms.spec.rho = *cfg.rho;

    const ConvergenceTable table =
        mms_error_study(mms, cfg.n, cfg.jobs, cfg.m.value_or(0));
    write_file(cfg.out, [&](std::ostream& os) { write_table_csv(os, table); });
    std::cout << "wrote " << cfg.out << " (" << table.rows.size() << " cells)\n";
    return 0;
}

int cmd_audit(const RunConfig& cfg)
{
    const ProblemSpec spec = make_spec(cfg);
    const int n = cfg.n.front();
    const int m = cfg.m.value_or(n);
    const AuditReport report = audit_problem(spec, n, m);
    write_file(cfg.out, [&](std::ostream& os) { write_audit_csv(os, report); });
    std::printf("threshold_holds=%d lhs=%s rhs=%s sign_failures=%d guard_failures=%d rows=%zu\n",
                report.threshold_holds ? 1 : 0, format_double(report.threshold_lhs).c_str(),
                format_double(report.threshold_rhs).c_str(), report.sign_failures,
                report.guard_failures, report.rows.size());
    std::cout << "wrote " << cfg.out << "\n";
    if (cfg.strict_audit && report.sign_failures > 0)
        throw NumericalError(std::to_string(report.sign_failures) +
                             " rows failed monotonicity sign checks");
    return 0;
}

int cmd_mesh_dump(const RunConfig& cfg)
{
    const ProblemSpec spec = make_spec(cfg);
    spec.validate();
    const SpatialMesh mesh = make_mesh(spec, cfg.n.front());
    write_file(cfg.out, [&](std::ostream& os) { write_mesh_csv(os, mesh); });
    std::cout << "wrote " << cfg.out << " (" << mesh.n + 1 << " nodes)\n";
    return 0;
}

} // namespace

int run(const RunConfig& cfg)
{
    switch (cfg.command) {
    case RunConfig::Command::Solve: return cmd_solve(cfg);
    case RunConfig::Command::Sweep: return cmd_sweep(cfg);
    case RunConfig::Command::Mms: return cmd_mms(cfg);
    case RunConfig::Command::Audit: return cmd_audit(cfg);
    case RunConfig::Command::MeshDump: return cmd_mesh_dump(cfg);
    }
    throw ConfigError("unhandled command");
}

} // namespace sppde::cli
