#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sppde/scheme.hpp"
#include "sppde/solver.hpp"
#include "sppde/verify.hpp"

namespace sppde {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// Header "x,t,u"; one row per grid point, row-major in t then x.
void write_surface_csv(std::ostream& os, const SolutionField& field);

struct SurfaceData {
    std::vector<double> x, t, u; ///< flattened in file order
};

SurfaceData read_surface_csv(std::istream& is);

/// Header "i,x".
void write_mesh_csv(std::ostream& os, const SpatialMesh& mesh);

/// Header "i,x,tag,r_minus,r_center,r_plus,rowsum,guard_ok".
void write_audit_csv(std::ostream& os, const AuditReport& report);

/// Header "example,eps,mu,N,M,E,R"; missing R is an empty field; E uses
/// scientific notation with 4 significant digits.
void write_table_csv(std::ostream& os, const ConvergenceTable& table);

} // namespace sppde
