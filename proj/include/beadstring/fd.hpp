#pragma once

#include <vector>

#include "beadstring/model.hpp"

namespace beadstring {

/// Grid for the reference finite-difference solver. Every mass sits exactly
/// on a node and dt = T / ceil(T / (cfl * dx)) <= cfl * dx.
struct FDGrid {
    SystemGrid space;
    double dt = 0.0;
    double cfl = 0.9;

    static FDGrid make(const StringSystem& sys, double target_dx, double T,
                       double cfl = 0.9);
};

/// Leapfrog march of the coupled string/mass system: interior nodes advance
/// by u_tt = u_xx - q u, each mass node by Newton's law with the flux jump
/// from one-sided second-order stencils, u(0,t) = f(t), u(ell,t) = 0.
/// Returns the state at time T with velocities from central time differences.
StateSnapshot simulate_fd(const StringSystem& sys, const SampledFunction& f, double T,
                          const FDGrid& grid);

/// Optional trajectory dump: calls `sink(t, x, u)` for every node of every
/// `stride`-th time level.
StateSnapshot simulate_fd_traced(const StringSystem& sys, const SampledFunction& f,
                                 double T, const FDGrid& grid,
                                 const std::function<void(double, double, double)>& sink,
                                 int stride);

struct StateGap {
    double l2 = 0.0;        // displacement gap
    double w0 = 0.0;        // displacement gap in the discrete W_0 norm
    double wm1 = 0.0;       // velocity gap in the discrete W_{-1} norm
    double l2_vel = 0.0;    // velocity gap in L2
    std::vector<double> mass_gap; // |h_j(T) difference|
};

/// Gaps between two snapshots; grids may differ (linear resampling onto the
/// finer of the two, segment by segment).
StateGap compare_states(const StateSnapshot& a, const StateSnapshot& b,
                        const StringSystem& sys);

} // namespace beadstring
