#pragma once

// Independent reference implementations used only by tests. These stay
// deliberately naive and separate from the library code paths they check.

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

// Goursat kernel by Picard iteration in characteristic coordinates, written
// with per-row cumulative integrals and an explicit outer trapezoid per
// point (distinct from the library's two-pass prefix scheme). Returns k(x,t)
// for one query point. q is given in the kernel's own coordinate (distance
// from the base point).
inline double goursat_point(const std::function<double(double)>& q, double x, double t,
                            double horizon, int n_steps, int sweeps = 40) {
    const int nc = 2 * n_steps;
    const double hc = horizon / nc;
    std::vector<double> W(nc + 1, 0.0);
    for (int i = 1; i <= nc; ++i)
        W[i] = W[i - 1] - 0.25 * hc * (q((i - 1) * hc) + q(i * hc));

    std::vector<std::vector<double>> K(nc + 1), rowint(nc + 1);
    for (int I = 0; I <= nc; ++I) {
        K[I].assign(I + 1, 0.0);
        rowint[I].assign(I + 1, 0.0);
        for (int J = 0; J <= I; ++J) K[I][J] = W[I] - W[J];
    }
    for (int s = 0; s < sweeps; ++s) {
        // rowint[a][J] = trapz over tau in [0, min(J,a)] of q(a - tau) K(a, tau)
        for (int a = 0; a <= nc; ++a) {
            double acc = 0.0;
            double prev = q(a * hc) * K[a][0];
            rowint[a][0] = 0.0;
            for (int J = 1; J <= a; ++J) {
                const double cur = q((a - J) * hc) * K[a][J];
                acc += 0.5 * hc * (prev + cur);
                prev = cur;
                rowint[a][J] = acc;
            }
        }
        double delta = 0.0;
        for (int I = 0; I <= nc; ++I) {
            for (int J = 0; J <= I; ++J) {
                double acc = 0.0;
                if (I > J) {
                    for (int a = J; a <= I; ++a) {
                        const double w = (a == J || a == I) ? 0.5 : 1.0;
                        acc += w * rowint[a][std::min(J, a)];
                    }
                    acc *= hc;
                }
                const double next = W[I] - W[J] - acc;
                delta = std::max(delta, std::abs(next - K[I][J]));
                K[I][J] = next;
            }
        }
        if (delta < 1e-14) break;
    }
    // bilinear interpolation in characteristic coordinates
    const double si = (t + x) / (2 * hc), sj = (t - x) / (2 * hc);
    const int I = std::min(static_cast<int>(si), nc - 1);
    const int J = std::min(static_cast<int>(sj), nc - 1);
    const double wi = si - I, wj = sj - J;
    auto val = [&](int a, int b) { return K[a][std::min(b, a)]; };
    return (1 - wi) * (1 - wj) * val(I, J) + wi * (1 - wj) * val(I + 1, J) +
           (1 - wi) * wj * val(I, J + 1) + wi * wj * val(I + 1, J + 1);
}

// Richardson-extrapolated value (the scheme is second order).
inline double goursat_point_richardson(const std::function<double(double)>& q, double x,
                                       double t, double horizon, int n_steps) {
    const double kh = goursat_point(q, x, t, horizon, n_steps);
    const double kh2 = goursat_point(q, x, t, horizon, 2 * n_steps);
    return (4.0 * kh2 - kh) / 3.0;
}

// Closed form for constant potential q = c > 0:
//   k(x, t) = -c x J_1(sqrt(c) z) / (sqrt(c) z),  z = sqrt(t^2 - x^2).
inline double goursat_const_q(double c, double x, double t) {
    const double z = std::sqrt(std::max(0.0, t * t - x * x));
    const double arg = std::sqrt(c) * z;
    if (arg < 1e-8) return -0.5 * c * x; // J1(w)/w -> 1/2
    return -c * x * std::cyl_bessel_j(1.0, arg) / arg;
}

// Bisection on a scalar function; assumes a sign change in [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-13, int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((flo < 0) == (fm < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Composite Simpson over uniformly sampled values (even interval count).
inline double simpson(const std::vector<double>& v, double h) {
    const size_t n = v.size() - 1;
    double acc = v[0] + v[n];
    for (size_t i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * v[i];
    return acc * h / 3.0;
}

} // namespace oracles
