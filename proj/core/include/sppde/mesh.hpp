#pragma once

#include <array>
#include <utility>
#include <vector>

#include "sppde/problem.hpp"

namespace sppde {

/// Boundary/interior layer decay rates for the active regime.
struct LayerRates {
    double theta1 = 0.0, theta2 = 0.0;
};

LayerRates compute_thetas(const ProblemSpec& spec, Regime regime);

/// Widths of the four fine regions [0,tau1], [d-tau2,d], [d,d+tau3], [1-tau4,1].
struct TransitionWidths {
    double tau1 = 0, tau2 = 0, tau3 = 0, tau4 = 0;
};

/// tau = min(quarter-width, (2/theta) ln N) per region. Requires n >= 16 and
/// n divisible by 8.
TransitionWidths compute_transition_points(const ProblemSpec& spec,
                                           const LayerRates& rates, int n);

/// Piecewise-uniform spatial mesh: six uniform blocks with
/// N/8, N/4, N/8, N/8, N/4, N/8 intervals and x_{N/2} = d exactly.
class SpatialMesh {
public:
    std::vector<double> nodes;          ///< N+1 positions, strictly increasing
    TransitionWidths tau;
    std::array<double, 6> seg_steps{};  ///< h_1..h_6
    int n = 0;

    int d_index() const { return n / 2; }

    /// Step x_i - x_{i-1}, valid for 1 <= i <= n.
    double h(int i) const { return nodes[i] - nodes[i - 1]; }
    /// Mean step (h_i + h_{i+1}) / 2, valid for 1 <= i <= n-1.
    double hbar(int i) const { return 0.5 * (h(i) + h(i + 1)); }
    /// Per-segment step, k in 1..6.
    double step_in_segment(int k) const { return seg_steps[static_cast<size_t>(k - 1)]; }

    /// Node indices bounding the six segments: {0, N/8, 3N/8, N/2, 5N/8, 7N/8, N}.
    static std::array<int, 7> segment_bounds(int n);
};

SpatialMesh build_spatial_mesh(const ProblemSpec& spec, const TransitionWidths& tau, int n);

struct TimeGrid {
    std::vector<double> levels; ///< M+1 times, uniform, levels[0]=0, levels[M]=T
    double dt = 0.0;

    int m() const { return static_cast<int>(levels.size()) - 1; }
};

TimeGrid build_time_grid(double T, int m);

/// Midpoint refinement: coarse node i is fine node 2i bitwise; transition
/// widths are kept, not recomputed for 2N.
std::pair<SpatialMesh, TimeGrid> bisect(const SpatialMesh& mesh, const TimeGrid& grid);

} // namespace sppde
