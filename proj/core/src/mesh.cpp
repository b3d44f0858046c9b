#include "sppde/mesh.hpp"

#include <cmath>
#include <sstream>

namespace sppde {

LayerRates compute_thetas(const ProblemSpec& spec, Regime regime)
{
    LayerRates rates;
    if (regime == Regime::EpsDominant) {
        const double root = std::sqrt(spec.rho * spec.alpha()) / std::sqrt(spec.eps);
        rates.theta1 = root;
        rates.theta2 = 0.5 * root;
    } else {
        rates.theta1 = spec.alpha() * spec.mu / spec.eps;
        rates.theta2 = 0.5 * spec.rho / spec.mu;
    }
    return rates;
}

TransitionWidths compute_transition_points(const ProblemSpec& spec,
                                           const LayerRates& rates, int n)
{
    if (n < 16 || n % 8 != 0)
        throw DomainError("mesh size must be >= 16 and divisible by 8");
    if (!(rates.theta1 > 0.0 && rates.theta2 > 0.0))
        throw DomainError("layer rates must be positive");

    const double logn = std::log(static_cast<double>(n));
    TransitionWidths tau;
    tau.tau1 = std::min(spec.d / 4.0, 2.0 / rates.theta2 * logn);
    tau.tau2 = std::min(spec.d / 4.0, 2.0 / rates.theta1 * logn);
    tau.tau3 = std::min((1.0 - spec.d) / 4.0, 2.0 / rates.theta1 * logn);
    tau.tau4 = std::min((1.0 - spec.d) / 4.0, 2.0 / rates.theta2 * logn);
    return tau;
}

std::array<int, 7> SpatialMesh::segment_bounds(int n)
{
    return {0, n / 8, 3 * n / 8, n / 2, 5 * n / 8, 7 * n / 8, n};
}

SpatialMesh build_spatial_mesh(const ProblemSpec& spec, const TransitionWidths& tau, int n)
{
    if (n < 8 || n % 8 != 0)
        throw DomainError("mesh size must be divisible by 8");

    const double d = spec.d;
    const std::array<double, 7> anchors = {0.0,          tau.tau1, d - tau.tau2, d,
                                           d + tau.tau3, 1.0 - tau.tau4, 1.0};
    SpatialMesh mesh;
    mesh.n = n;
    mesh.tau = tau;
    mesh.seg_steps = {8.0 * tau.tau1 / n,
                      4.0 * (d - tau.tau1 - tau.tau2) / n,
                      8.0 * tau.tau2 / n,
                      8.0 * tau.tau3 / n,
                      4.0 * (1.0 - d - tau.tau3 - tau.tau4) / n,
                      8.0 * tau.tau4 / n};
    for (int k = 0; k < 6; ++k) {
        if (!(anchors[static_cast<size_t>(k) + 1] - anchors[static_cast<size_t>(k)] > 0.0)) {
            std::ostringstream msg;
            msg << "degenerate mesh segment " << (k + 1) << ": ["
                << anchors[static_cast<size_t>(k)] << ", " << anchors[static_cast<size_t>(k) + 1]
                << "]";
            throw DomainError(msg.str());
        }
    }

    const auto bounds = SpatialMesh::segment_bounds(n);
    mesh.nodes.assign(static_cast<size_t>(n) + 1, 0.0);
    for (int k = 0; k < 6; ++k) {
        const int i0 = bounds[static_cast<size_t>(k)];
        const int i1 = bounds[static_cast<size_t>(k) + 1];
        const double start = anchors[static_cast<size_t>(k)];
        const double h = mesh.seg_steps[static_cast<size_t>(k)];
        for (int i = i0; i < i1; ++i)
            mesh.nodes[static_cast<size_t>(i)] = start + (i - i0) * h;
        // transition points and d are anchored exactly, no step accumulation
        mesh.nodes[static_cast<size_t>(i1)] = anchors[static_cast<size_t>(k) + 1];
    }

    for (int i = 1; i <= n; ++i) {
        if (!(mesh.nodes[static_cast<size_t>(i)] > mesh.nodes[static_cast<size_t>(i) - 1]))
            throw DomainError("mesh nodes are not strictly increasing "
                              "(transition widths below spacing resolution)");
    }
    return mesh;
}

TimeGrid build_time_grid(double T, int m)
{
    if (m < 1)
        throw DomainError("time grid needs at least one step");
    if (!(T > 0.0))
        throw DomainError("final time must be positive");

    TimeGrid grid;
    grid.dt = T / m;
    grid.levels.resize(static_cast<size_t>(m) + 1);
    for (int j = 0; j <= m; ++j)
        grid.levels[static_cast<size_t>(j)] = j * grid.dt;
    grid.levels.back() = T;
    return grid;
}

std::pair<SpatialMesh, TimeGrid> bisect(const SpatialMesh& mesh, const TimeGrid& grid)
{
    SpatialMesh fine;
    fine.n = 2 * mesh.n;
    fine.tau = mesh.tau;
    for (size_t k = 0; k < 6; ++k)
        fine.seg_steps[k] = 0.5 * mesh.seg_steps[k];
    fine.nodes.resize(static_cast<size_t>(fine.n) + 1);
    for (int i = 0; i < mesh.n; ++i) {
        fine.nodes[static_cast<size_t>(2 * i)] = mesh.nodes[static_cast<size_t>(i)];
        fine.nodes[static_cast<size_t>(2 * i) + 1] =
            0.5 * (mesh.nodes[static_cast<size_t>(i)] + mesh.nodes[static_cast<size_t>(i) + 1]);
    }
    fine.nodes.back() = mesh.nodes.back();

    TimeGrid fg;
    fg.dt = 0.5 * grid.dt;
    fg.levels.resize(2 * grid.levels.size() - 1);
    for (size_t j = 0; j + 1 < grid.levels.size(); ++j) {
        fg.levels[2 * j] = grid.levels[j];
        fg.levels[2 * j + 1] = 0.5 * (grid.levels[j] + grid.levels[j + 1]);
    }
    fg.levels.back() = grid.levels.back();
    return {std::move(fine), std::move(fg)};
}

} // namespace sppde
