#include "beadstring/goursat.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <tuple>

#include "beadstring/errors.hpp"

namespace beadstring {

namespace {

// q along the characteristic coordinate: q(b + dir*xi), constant extension
// beyond the segment.
double q_along(const StringSystem& sys, int segment, int direction, double xi) {
    const double len = sys.segment_length(segment);
    const double local = direction > 0 ? xi : len - xi;
    return sys.potential(segment).eval(local, len);
}

// Ragged storage over the characteristic triangle {J <= I, I + J <= nc}.
struct TriGrid {
    int nc;
    std::vector<size_t> offset; // row I starts at offset[I], width(I) entries
    std::vector<double> v;

    explicit TriGrid(int nc_) : nc(nc_), offset(static_cast<size_t>(nc_) + 2, 0) {
        for (int I = 0; I <= nc; ++I)
            offset[static_cast<size_t>(I) + 1] =
                offset[static_cast<size_t>(I)] + static_cast<size_t>(width(I)) + 1;
        v.assign(offset[static_cast<size_t>(nc) + 1], 0.0);
    }
    int width(int I) const { return std::min(I, nc - I); }
    double& at(int I, int J) { return v[offset[static_cast<size_t>(I)] + static_cast<size_t>(J)]; }
    double at(int I, int J) const {
        return v[offset[static_cast<size_t>(I)] + static_cast<size_t>(J)];
    }
    // Row value with the above-diagonal clamp: entries with J > I equal the
    // J = I value (the integrand vanishes above the diagonal).
    double clamped(int I, int J) const { return at(I, std::min(J, width(I))); }
};

} // namespace

double KernelTable::value(double x, double t) const {
    if (zero) return 0.0;
    if (t <= x || x < 0.0) return 0.0;
    const double sx = x / step, st = t / step;
    int ix = static_cast<int>(sx), it = static_cast<int>(st);
    ix = std::min(ix, n - 1);
    it = std::min(it, n - 1);
    const double wx = sx - ix, wt = st - it;
    auto clamped = [&](int a, int b) {
        if (a > b) a = b;
        return at(a, b);
    };
    const double v00 = clamped(ix, it), v10 = clamped(ix + 1, it);
    const double v01 = clamped(ix, it + 1), v11 = clamped(ix + 1, it + 1);
    return (1 - wx) * (1 - wt) * v00 + wx * (1 - wt) * v10 + (1 - wx) * wt * v01 +
           wx * wt * v11;
}

double KernelTable::interior_residual(const StringSystem& sys, int segment) const {
    if (zero) return 0.0;
    const double h2 = step * step;
    double worst = 0.0;
    for (int it = 2; it + 1 <= n; ++it) {
        for (int ix = 1; ix + 1 <= it - 1; ++ix) {
            const double ktt = (at(ix, it + 1) - 2.0 * at(ix, it) + at(ix, it - 1)) / h2;
            const double kxx = (at(ix + 1, it) - 2.0 * at(ix, it) + at(ix - 1, it)) / h2;
            const double qv = q_along(sys, segment, direction, ix * step);
            worst = std::max(worst, std::abs(ktt - kxx + qv * at(ix, it)));
        }
    }
    return worst;
}

KernelTable build_kernel(const StringSystem& sys, int segment, int direction,
                         double horizon, double step) {
    if (!(horizon > 0.0) || !(step > 0.0))
        throw PreconditionError("kernel horizon and step must be positive");
    const double ratio = horizon / step;
    const int n = static_cast<int>(std::lround(ratio));
    if (n < 4 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio))
        throw PreconditionError("kernel step must divide the horizon");

    KernelTable table;
    table.base = direction > 0 ? sys.a(segment) : sys.a(segment + 1);
    table.direction = direction;
    table.horizon = horizon;
    table.step = step;
    table.n = n;

    if (sys.potential(segment).is_zero()) {
        table.zero = true;
        table.diag.assign(static_cast<size_t>(n) + 1, 0.0);
        table.left_dx.assign(static_cast<size_t>(n) + 1, 0.0);
        return table;
    }
    table.zero = false;

    // Characteristic coordinates xi = (t+x)/2, eta = (t-x)/2 on a grid of
    // step h/2: the Goursat problem becomes K_{xi eta} = -q(xi - eta) K with
    // K(xi, 0) = w(xi) and K(eta, eta) = 0, where w(xi) is the diagonal
    // integral. Picard iteration:
    //   K <- w(xi) - w(eta) - int_{[eta,xi] x [0,eta]} q K,
    // the rectangle integral evaluated through prefix product-trapezoid sums
    // P so each sweep costs O(n^2):
    //   int_{[eta,xi] x [0,eta]} = P(xi,eta) - P(eta,eta).
    const int nc = 2 * n;
    const double hc = step / 2.0;

    std::vector<double> qdiff(static_cast<size_t>(nc) + 1);
    for (int i = 0; i <= nc; ++i)
        qdiff[static_cast<size_t>(i)] = q_along(sys, segment, direction, i * hc);

    std::vector<double> W(static_cast<size_t>(nc) + 1, 0.0);
    for (int i = 1; i <= nc; ++i)
        W[static_cast<size_t>(i)] = W[static_cast<size_t>(i - 1)] -
                                    0.25 * hc * (qdiff[static_cast<size_t>(i - 1)] +
                                                 qdiff[static_cast<size_t>(i)]);

    TriGrid K(nc), F(nc), P(nc);
    for (int I = 0; I <= nc; ++I)
        for (int J = 0; J <= K.width(I); ++J)
            K.at(I, J) = W[static_cast<size_t>(I)] - W[static_cast<size_t>(J)];

    double qmax = 0.0;
    for (double v : qdiff) qmax = std::max(qmax, std::abs(v));
    const double eps_k = 1e-12 * (1.0 + qmax * horizon * horizon);
    const int max_sweeps = 200;

    double delta = eps_k + 1.0;
    for (int sweep = 0; sweep < max_sweeps && delta >= eps_k; ++sweep) {
        for (int I = 0; I <= nc; ++I)
            for (int J = 0; J <= F.width(I); ++J)
                F.at(I, J) = qdiff[static_cast<size_t>(I - J)] * K.at(I, J);

        // Pass 1: F rows become cumulative trapezoid sums in J (rowcum).
        for (int I = 0; I <= nc; ++I) {
            double acc = 0.0, prev = F.at(I, 0);
            F.at(I, 0) = 0.0;
            for (int J = 1; J <= F.width(I); ++J) {
                const double cur = F.at(I, J);
                acc += 0.5 * hc * (prev + cur);
                prev = cur;
                F.at(I, J) = acc;
            }
        }
        // Pass 2: P(I, J) = cumulative trapezoid in I of rowcum(., J).
        // rowcum above the diagonal is constant in J (clamped accessor).
        for (int J = 0; J <= nc / 2; ++J) {
            double acc = 0.0, prev = F.clamped(0, J);
            for (int I = 1; I + J <= nc; ++I) {
                const double cur = F.clamped(I, J);
                acc += 0.5 * hc * (prev + cur);
                prev = cur;
                if (J <= P.width(I)) P.at(I, J) = acc;
            }
        }
        if (nc >= 0) P.at(0, 0) = 0.0;

        delta = 0.0;
        for (int I = 0; I <= nc; ++I) {
            for (int J = 0; J <= K.width(I); ++J) {
                const double next = W[static_cast<size_t>(I)] - W[static_cast<size_t>(J)] -
                                    (P.at(I, J) - P.at(J, J));
                delta = std::max(delta, std::abs(next - K.at(I, J)));
                K.at(I, J) = next;
            }
        }
    }
    if (delta >= eps_k)
        throw NumericalError("goursat kernel Picard iteration did not converge; "
                             "step too coarse for this potential");

    // Back to (x, t): x = ix*h, t = it*h -> I = ix + it, J = it - ix.
    table.k.assign(KernelTable::tri(0, n) + static_cast<size_t>(n) + 1, 0.0);
    for (int it = 0; it <= n; ++it)
        for (int ix = 0; ix <= it; ++ix)
            table.k[KernelTable::tri(ix, it)] = K.at(ix + it, it - ix);

    table.diag.resize(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) table.diag[static_cast<size_t>(i)] = table.at(i, i);

    // dk/dx(0, t): one-sided stencils, k(0, t) = 0 exactly
    table.left_dx.assign(static_cast<size_t>(n) + 1, 0.0);
    for (int it = 1; it <= n; ++it) {
        double v;
        if (it >= 3)
            v = (18.0 * table.at(1, it) - 9.0 * table.at(2, it) + 2.0 * table.at(3, it)) /
                (6.0 * step);
        else if (it == 2)
            v = (4.0 * table.at(1, 2) - table.at(2, 2)) / (2.0 * step);
        else
            v = table.at(1, 1) / step;
        table.left_dx[static_cast<size_t>(it)] = v;
    }
    table.left_dx[0] = -0.5 * q_along(sys, segment, direction, 0.0);
    return table;
}

KernelLine edge_derivatives(const KernelTable& table, double x0) {
    const double s = x0 / table.step;
    const int ix = static_cast<int>(std::lround(s));
    if (std::abs(s - ix) > 1e-9 * std::max(1.0, s) || ix < 0 || ix > table.n)
        throw PreconditionError("edge_derivatives: x0 is off the kernel grid");

    KernelLine line;
    line.x0 = x0;
    line.t0 = x0;
    line.step = table.step;
    const int m = table.n - ix;
    line.k.assign(static_cast<size_t>(m) + 1, 0.0);
    line.dk_dx.assign(static_cast<size_t>(m) + 1, 0.0);
    line.dk_ds.assign(static_cast<size_t>(m) + 1, 0.0);
    if (table.zero) return line;

    const double h = table.step;
    auto at = [&](int i, int t) { return table.at(i, t); };
    for (int r = 0; r <= m; ++r) {
        const int it = ix + r;
        line.k[static_cast<size_t>(r)] = at(ix, it);

        // d/dx at (ix, it): central where the stencil stays inside the
        // triangle, otherwise one-sided into decreasing x.
        double dx;
        if (ix + 1 <= it && ix >= 1)
            dx = (at(ix + 1, it) - at(ix - 1, it)) / (2.0 * h);
        else if (ix >= 3)
            dx = (11.0 * at(ix, it) - 18.0 * at(ix - 1, it) + 9.0 * at(ix - 2, it) -
                  2.0 * at(ix - 3, it)) / (6.0 * h);
        else if (ix >= 1)
            dx = (at(ix, it) - at(ix - 1, it)) / h;
        else
            dx = table.left_dx[static_cast<size_t>(it)];
        line.dk_dx[static_cast<size_t>(r)] = dx;

        double ds;
        if (it - 1 >= ix && it + 1 <= table.n)
            ds = (at(ix, it + 1) - at(ix, it - 1)) / (2.0 * h);
        else if (it + 3 <= table.n)
            ds = (-11.0 * at(ix, it) + 18.0 * at(ix, it + 1) - 9.0 * at(ix, it + 2) +
                  2.0 * at(ix, it + 3)) / (6.0 * h);
        else if (it - 3 >= ix)
            ds = (11.0 * at(ix, it) - 18.0 * at(ix, it - 1) + 9.0 * at(ix, it - 2) -
                  2.0 * at(ix, it - 3)) / (6.0 * h);
        else if (it + 1 <= table.n)
            ds = (at(ix, it + 1) - at(ix, it)) / h;
        else if (it - 1 >= ix)
            ds = (at(ix, it) - at(ix, it - 1)) / h;
        else
            ds = 0.0;
        line.dk_ds[static_cast<size_t>(r)] = ds;
    }
    return line;
}

void dump_kernel_csv(const KernelTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << "x,t,k\n";
    char buf[96];
    for (int it = 0; it <= table.n; ++it)
        for (int ix = 0; ix <= it; ++ix) {
            std::snprintf(buf, sizeof(buf), "%.16e,%.16e,%.16e\n", ix * table.step,
                          it * table.step, table.at(ix, it));
            out << buf;
        }
}

const KernelTable& KernelCache::get(int segment, int direction, double horizon,
                                    double step) {
    const double unit = sys_->ell();
    const long bucket = std::max<long>(1, static_cast<long>(std::ceil(horizon / unit - 1e-12)));
    const double h_rounded = bucket * unit;
    const long nsteps = static_cast<long>(std::ceil(h_rounded / step - 1e-9));
    const long step_key = static_cast<long>(std::llround(step * 1e12));
    const auto key = std::make_tuple(segment, direction, nsteps, step_key);

    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
        auto table = std::make_shared<KernelTable>(
            build_kernel(*sys_, segment, direction, nsteps * step, step));
        it = cache_.emplace(key, std::move(table)).first;
    }
    return *it->second;
}

} // namespace beadstring
