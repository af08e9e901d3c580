#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "beadstring/model.hpp"

namespace beadstring {

/// Sampled solution of the Goursat problem
///   k_tt - k_xx + q(x + b) k = 0          on {0 < x < t},
///   k(0, t) = 0,   k(x, x) = -1/2 int_0^x q(eta + b) d eta,
/// on the discrete triangle {0 <= x <= t <= H} with step h. `direction`
/// tells which side of the base point the segment potential is read from
/// (+1: q(b + xi), -1: q(b - xi)).
struct KernelTable {
    double base = 0.0;
    int direction = +1;
    double horizon = 0.0;
    double step = 0.0;
    int n = 0;      // horizon / step
    bool zero = true;

    std::vector<double> k;       // triangle storage, index tri(ix, it)
    std::vector<double> diag;    // k(x_i, x_i)
    std::vector<double> left_dx; // dk/dx(0, t_i)

    static size_t tri(int ix, int it) {
        return static_cast<size_t>(it) * (static_cast<size_t>(it) + 1) / 2 +
               static_cast<size_t>(ix);
    }
    double at(int ix, int it) const { return zero ? 0.0 : k[tri(ix, it)]; }
    /// Bilinear interpolation inside the triangle; 0 for t <= x.
    double value(double x, double t) const;

    /// Max-norm residual of the discrete wave operator over interior nodes.
    double interior_residual(const StringSystem& sys, int segment) const;
};

/// Builds the kernel for one segment and direction by Picard iteration on
/// the equivalent characteristic integral equation. Throws NumericalError
/// if the iteration fails to contract within the sweep cap.
KernelTable build_kernel(const StringSystem& sys, int segment, int direction,
                         double horizon, double step);

/// Kernel samples and one-sided derivatives along the line x = x0,
/// for t = x0, x0+h, ..., H.
struct KernelLine {
    double x0 = 0.0;
    double t0 = 0.0; // first sample time (= x0)
    double step = 0.0;
    std::vector<double> k;     // k(x0, t)
    std::vector<double> dk_dx; // dk/dx(x0, t)
    std::vector<double> dk_ds; // dk/dt(x0, t)
};

/// One-sided finite-difference derivatives (order >= 2) along x = x0.
/// x0 must lie on the grid.
KernelLine edge_derivatives(const KernelTable& table, double x0);

void dump_kernel_csv(const KernelTable& table, const std::string& path);

/// Kernels are reused across every propagation/reflection formula, so they
/// are cached per (segment, direction, horizon bucket, step).
class KernelCache {
public:
    explicit KernelCache(const StringSystem& sys) : sys_(&sys) {}

    /// Returns a kernel whose horizon is at least `horizon` (rounded up to
    /// a multiple of the total length).
    const KernelTable& get(int segment, int direction, double horizon, double step);

private:
    const StringSystem* sys_;
    std::map<std::tuple<int, int, long, long>, std::shared_ptr<const KernelTable>> cache_;
    std::mutex mu_;
};

} // namespace beadstring
