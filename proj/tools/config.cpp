#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "sppde/errors.hpp"

namespace sppde::cli {

namespace {

const std::vector<std::pair<std::string, RunConfig::Command>> kCommands = {
    {"solve", RunConfig::Command::Solve},       {"sweep", RunConfig::Command::Sweep},
    {"mms", RunConfig::Command::Mms},           {"audit", RunConfig::Command::Audit},
    {"mesh-dump", RunConfig::Command::MeshDump}};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// keys mirror the flags one-to-one
const std::vector<std::string> kFileKeys = {"example", "eps", "mu",   "N",
                                            "M",       "rho", "out",  "jobs",
                                            "strict-audit"};

std::vector<std::string> tokens_from_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::vector<std::string> tokens;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config file " + path + ":" + std::to_string(lineno) +
                              ": expected key=value, got '" + t + "'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (std::find(kFileKeys.begin(), kFileKeys.end(), key) == kFileKeys.end())
            throw ConfigError("config file " + path + ": unknown key '" + key + "'");
        if (key == "strict-audit") {
            if (value == "true" || value == "1")
                tokens.push_back("--strict-audit");
            else if (value != "false" && value != "0")
                throw ConfigError("config file " + path + ": strict-audit must be true or false");
            continue;
        }
        tokens.push_back("--" + key + "=" + value);
    }
    return tokens;
}

std::vector<std::string> split_commas(const std::string& s)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

std::vector<double> parse_unit_interval_list(const std::string& csv, const std::string& flag)
{
    std::vector<double> values;
    for (const std::string& tok : split_commas(csv)) {
        const double v = parse_number(trim(tok));
        if (!(v > 0.0 && v <= 1.0))
            throw ConfigError(flag + " values must lie in (0, 1], got '" + tok + "'");
        values.push_back(v);
    }
    return values;
}

std::vector<int> parse_mesh_list(const std::string& csv)
{
    std::vector<int> values;
    for (const std::string& tok : split_commas(csv)) {
        const std::string t = trim(tok);
        char* end = nullptr;
        const long v = std::strtol(t.c_str(), &end, 10);
        if (end == t.c_str() || *end != '\0')
            throw ConfigError("N expects integers, got '" + t + "'");
        if (v < 16 || v % 8 != 0)
            throw ConfigError("N must be divisible by 8 and at least 16, got " + t);
        values.push_back(static_cast<int>(v));
    }
    return values;
}

std::string default_out(RunConfig::Command cmd)
{
    switch (cmd) {
    case RunConfig::Command::Solve: return "surface.csv";
    case RunConfig::Command::Sweep: return "table.csv";
    case RunConfig::Command::Mms: return "mms_table.csv";
    case RunConfig::Command::Audit: return "audit.csv";
    case RunConfig::Command::MeshDump: return "mesh.csv";
    }
    return "out.csv";
}

} // namespace

double parse_number(const std::string& token)
{
    if (token.rfind("2^", 0) == 0) {
        const std::string exp = token.substr(2);
        char* end = nullptr;
        const long k = std::strtol(exp.c_str(), &end, 10);
        if (end == exp.c_str() || *end != '\0')
            throw ConfigError("malformed binary power '" + token + "'");
        return std::ldexp(1.0, static_cast<int>(k));
    }
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0')
        throw ConfigError("malformed number '" + token + "'");
    return v;
}

std::string usage()
{
    std::ostringstream os;
    os << "usage: sppde <command> [flags]\n"
       << "\n"
       << "commands:\n"
       << "  solve      run one problem; writes a surface CSV and an audit CSV\n"
       << "  sweep      double-mesh error/order table over eps x mu x N\n"
       << "  mms        exact-error table for a manufactured problem\n"
       << "  audit      per-row monotonicity report for the first step\n"
       << "  mesh-dump  node positions of the layer-adapted mesh\n"
       << "\n"
       << "flags:\n"
       << "  --example NAME    example1|example2|example3|mms-smooth|mms-layer\n"
       << "  --eps LIST        perturbation parameter(s); 2^-k form is exact\n"
       << "  --mu LIST         perturbation parameter(s)\n"
       << "  --N LIST          mesh sizes, divisible by 8, >= 16\n"
       << "  --M INT           time steps (default: N)\n"
       << "  --rho VALUE       override the analysis constant rho\n"
       << "  --out PATH        output file\n"
       << "  --jobs INT        sweep concurrency (default: logical CPUs)\n"
       << "  --strict-audit    escalate monotonicity warnings to errors\n"
       << "  --config PATH     flat key=value file; flags override it\n";
    return os.str();
}

RunConfig parse_config(const std::vector<std::string>& args)
{
    if (args.empty() || args[0] == "-h" || args[0] == "--help" || args[0] == "help")
        throw HelpRequested{usage()};

    RunConfig cfg;
    bool found = false;
    for (const auto& [name, cmd] : kCommands) {
        if (args[0] == name) {
            cfg.command = cmd;
            found = true;
            break;
        }
    }
    if (!found)
        throw ConfigError("unknown command '" + args[0] +
                          "'; expected solve, sweep, mms, audit or mesh-dump");

    // pull --config out first so its tokens can precede (and lose to) the flags
    std::vector<std::string> cli_tokens;
    std::string config_path;
    for (size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config") {
            if (i + 1 >= args.size())
                throw ConfigError("--config expects a path");
            config_path = args[++i];
        } else if (a.rfind("--config=", 0) == 0) {
            config_path = a.substr(9);
        } else {
            cli_tokens.push_back(a);
        }
    }

    std::vector<std::string> tokens;
    if (!config_path.empty())
        tokens = tokens_from_file(config_path);
    tokens.insert(tokens.end(), cli_tokens.begin(), cli_tokens.end());

    std::string example = "example1", eps_csv, mu_csv, n_csv, out;
    std::string m_str, rho_str, jobs_str;
    bool strict = false;

    CLI::App app{"sppde"};
    app.add_option("--example", example)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.add_option("--eps", eps_csv)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.add_option("--mu", mu_csv)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.add_option("--N", n_csv)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.add_option("--M", m_str)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.add_option("--rho", rho_str)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.add_option("--out", out)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.add_option("--jobs", jobs_str)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.add_flag("--strict-audit", strict);

    std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    cfg.example = example;
    if (!eps_csv.empty())
        cfg.eps = parse_unit_interval_list(eps_csv, "--eps");
    if (!mu_csv.empty())
        cfg.mu = parse_unit_interval_list(mu_csv, "--mu");
    if (!n_csv.empty())
        cfg.n = parse_mesh_list(n_csv);
    if (!m_str.empty()) {
        char* end = nullptr;
        const long v = std::strtol(m_str.c_str(), &end, 10);
        if (end == m_str.c_str() || *end != '\0' || v < 1)
            throw ConfigError("M must be a positive integer, got '" + m_str + "'");
        cfg.m = static_cast<int>(v);
    }
    if (!rho_str.empty()) {
        const double v = parse_number(rho_str);
        if (!(v > 0.0))
            throw ConfigError("rho must be positive");
        cfg.rho = v;
    }
    if (!jobs_str.empty()) {
        char* end = nullptr;
        const long v = std::strtol(jobs_str.c_str(), &end, 10);
        if (end == jobs_str.c_str() || *end != '\0' || v < 0)
            throw ConfigError("jobs must be a nonnegative integer");
        cfg.jobs = static_cast<int>(v);
    }
    cfg.strict_audit = strict;
    cfg.out = out.empty() ? default_out(cfg.command) : out;

    // per-command shape checks
    const bool single_run = cfg.command == RunConfig::Command::Solve ||
                            cfg.command == RunConfig::Command::Audit ||
                            cfg.command == RunConfig::Command::MeshDump;
    if (cfg.n.empty())
        throw ConfigError("--N is required");
    if (single_run) {
        if (cfg.n.size() != 1 || cfg.eps.size() > 1 || cfg.mu.size() > 1)
            throw ConfigError("this command takes single --N, --eps and --mu values");
        if (!cfg.m)
            cfg.m = cfg.n.front();
    }
    if (cfg.command == RunConfig::Command::Sweep && cfg.m)
        throw ConfigError("sweep couples M = N per cell; --M is not accepted");
    return cfg;
}

RunConfig parse_config(int argc, const char* const* argv)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i)
        args.emplace_back(argv[i]);
    return parse_config(args);
}

} // namespace sppde::cli
