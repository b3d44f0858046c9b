#include "sppde/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace sppde {

std::string format_double(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string format_sci4(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string format_order(double v)
{
    if (std::isinf(v))
        return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

double parse_field(const std::string& s)
{
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw IoError("malformed numeric field '" + s + "'");
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

void write_surface_csv(std::ostream& os, const SolutionField& field)
{
    os << "x,t,u\n";
    for (int j = 0; j <= field.grid.m(); ++j) {
        const double t = field.grid.levels[static_cast<size_t>(j)];
        for (int i = 0; i <= field.mesh.n; ++i) {
            os << format_double(field.mesh.nodes[static_cast<size_t>(i)]) << ','
               << format_double(t) << ',' << format_double(field.u(i, j)) << '\n';
        }
    }
}

SurfaceData read_surface_csv(std::istream& is)
{
    SurfaceData data;
    std::string line;
    if (!std::getline(is, line))
        throw IoError("empty surface file");
    if (line == "x,t,u\r")
        line.pop_back();
    if (line != "x,t,u")
        throw IoError("unexpected surface header '" + line + "'");
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw IoError("surface row needs 3 fields");
        data.x.push_back(parse_field(fields[0]));
        data.t.push_back(parse_field(fields[1]));
        data.u.push_back(parse_field(fields[2]));
    }
    return data;
}

void write_mesh_csv(std::ostream& os, const SpatialMesh& mesh)
{
    os << "i,x\n";
    for (int i = 0; i <= mesh.n; ++i)
        os << i << ',' << format_double(mesh.nodes[static_cast<size_t>(i)]) << '\n';
}

void write_audit_csv(std::ostream& os, const AuditReport& report)
{
    os << "i,x,tag,r_minus,r_center,r_plus,rowsum,guard_ok\n";
    for (const RowAudit& row : report.rows) {
        os << row.i << ',' << format_double(row.x) << ',' << tag_name(row.tag) << ','
           << format_double(row.r_minus) << ',' << format_double(row.r_center) << ','
           << format_double(row.r_plus) << ',' << format_double(row.row_sum) << ','
           << (row.guard_ok ? 1 : 0) << '\n';
    }
}

void write_table_csv(std::ostream& os, const ConvergenceTable& table)
{
    os << "example,eps,mu,N,M,E,R\n";
    for (const SweepCell& cell : table.rows) {
        os << table.example << ',' << format_double(cell.eps) << ',' << format_double(cell.mu)
           << ',' << cell.n << ',' << cell.m << ',';
        if (cell.error)
            os << format_sci4(*cell.error);
        os << ',';
        if (cell.order)
            os << format_order(*cell.order);
        os << '\n';
    }
}

} // namespace sppde
