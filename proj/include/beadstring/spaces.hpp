#pragma once

#include <string>
#include <vector>

#include "beadstring/model.hpp"

namespace beadstring {

/// First derivative of uniform samples: central differences inside,
/// 4-point one-sided stencils at the ends (order >= 2 everywhere).
std::vector<double> sampled_derivative(const std::vector<double>& v, double dx);

/// L = -d^2/dx^2 + q applied n times, segmentwise (no coupling across
/// interfaces). Requires enough samples per segment for the stencils.
std::vector<SampledFunction> apply_L(const StringSystem& sys,
                                     const std::vector<SampledFunction>& phi, int power);

struct ConditionEntry {
    int junction = 0;  // 1..N are masses, N+1 is x = ell
    int order = 0;     // n in L^n
    bool derivative_jump = false; // odd-type (flux) condition
    bool diagnostic = false;      // beyond the order the space membership needs
    double residual = 0.0;
    double scale = 1.0;
    bool pass = true;
};

struct CompatibilityReport {
    std::vector<ConditionEntry> entries;
    bool all_pass = true;       // over non-diagnostic entries
    std::string to_json() const;
};

/// Evaluates the junction and endpoint identities that carve W_0 (for phi)
/// and W_{-1} (for the optional velocity psi) out of the broken Sobolev
/// spaces. Failures are report entries, never exceptions. `extra_orders`
/// adds higher-order rows as diagnostics.
CompatibilityReport check_compatibility(const std::vector<SampledFunction>& phi,
                                        const std::vector<SampledFunction>* psi,
                                        const StringSystem& sys, double tol,
                                        int extra_orders = 0);

/// W_0 inner product: sum_j [ <d^j a, d^j b>_{L2} + <a,b>_{L2} ] over segment
/// j plus sum_j M_j a(a_j^+) b(a_j^+).
double w0_inner(const std::vector<SampledFunction>& a,
                const std::vector<SampledFunction>& b, const StringSystem& sys);
double norm_w0(const std::vector<SampledFunction>& phi, const StringSystem& sys);

/// W_{-1} inner product: dual-H^1 term on (0, a_1) realized by the Riesz
/// representative of -w'' + w = psi, w(0) = 0, w'(a_1) = 0, plus H^{j-1}
/// terms on the remaining segments and the mass terms starting at j = 2
/// (the first mass velocity is excluded, matching the printed norm).
double wm1_inner(const std::vector<SampledFunction>& a,
                 const std::vector<SampledFunction>& b, const StringSystem& sys);
double norm_wm1(const std::vector<SampledFunction>& psi, const StringSystem& sys);

/// Riesz representative used by the theta' term (exposed for tests).
std::vector<double> theta_riesz_representative(const std::vector<double>& psi, double dx);

} // namespace beadstring
