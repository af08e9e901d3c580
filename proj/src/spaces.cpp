#include "beadstring/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "beadstring/errors.hpp"

namespace beadstring {

std::vector<double> sampled_derivative(const std::vector<double>& v, double dx) {
    const size_t n = v.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    if (n < 4) {
        for (size_t i = 0; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i]) / dx;
        d[n - 1] = d[n - 2];
        return d;
    }
    d[0] = (-11.0 * v[0] + 18.0 * v[1] - 9.0 * v[2] + 2.0 * v[3]) / (6.0 * dx);
    for (size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * dx);
    d[n - 1] = (11.0 * v[n - 1] - 18.0 * v[n - 2] + 9.0 * v[n - 3] - 2.0 * v[n - 4]) /
               (6.0 * dx);
    return d;
}

std::vector<SampledFunction> apply_L(const StringSystem& sys,
                                     const std::vector<SampledFunction>& phi, int power) {
    if (static_cast<int>(phi.size()) != sys.segment_count())
        throw PreconditionError("apply_L: segment count mismatch");
    std::vector<SampledFunction> out = phi;
    for (int p = 0; p < power; ++p) {
        for (int j = 0; j < sys.segment_count(); ++j) {
            SampledFunction& f = out[static_cast<size_t>(j)];
            if (f.size() < 5)
                throw PreconditionError("apply_L: insufficient samples on segment " +
                                        std::to_string(j));
            const std::vector<double> d1 = sampled_derivative(f.values, f.dx);
            const std::vector<double> d2 = sampled_derivative(d1, f.dx);
            for (size_t i = 0; i < f.size(); ++i) {
                const double x = f.grid(i);
                f.values[i] = -d2[i] + sys.q(j, x) * f.values[i];
            }
        }
    }
    return out;
}

namespace {

double trapz(const std::vector<double>& v, double dx) {
    if (v.size() < 2) return 0.0;
    double acc = 0.5 * (v.front() + v.back());
    for (size_t i = 1; i + 1 < v.size(); ++i) acc += v[i];
    return acc * dx;
}

double l2_inner(const std::vector<double>& a, const std::vector<double>& b, double dx) {
    std::vector<double> prod(a.size());
    for (size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
    return trapz(prod, dx);
}

std::vector<double> nth_derivative(const std::vector<double>& v, double dx, int n) {
    std::vector<double> d = v;
    for (int k = 0; k < n; ++k) d = sampled_derivative(d, dx);
    return d;
}

// ceil(i/2) for the condition counts; nonpositive i means vacuous
int half_up(int i) { return i <= 0 ? 0 : (i + 1) / 2; }

void append_junction_conditions(std::vector<ConditionEntry>& entries,
                                const std::vector<SampledFunction>& f,
                                const StringSystem& sys, int base, double tol,
                                int extra_orders) {
    const int nmass = sys.mass_count();

    int nmax = 0;
    for (int j = 1; j <= nmass; ++j)
        nmax = std::max(nmax, half_up(base + j - 1) + extra_orders);
    nmax = std::max(nmax, half_up(base + nmass) + extra_orders);
    // cap by the sampling (each L costs two derivative sweeps)
    size_t min_samples = SIZE_MAX;
    for (const auto& s : f) min_samples = std::min(min_samples, s.size());
    const int supported = std::max(0, static_cast<int>((min_samples - 1) / 4));
    nmax = std::min(nmax, supported);

    std::vector<std::vector<SampledFunction>> Ln(static_cast<size_t>(nmax) + 1);
    Ln[0] = f;
    for (int n = 1; n <= nmax; ++n)
        Ln[static_cast<size_t>(n)] = apply_L(sys, Ln[static_cast<size_t>(n - 1)], 1);

    auto end_value = [&](int n, int seg, bool right_end) {
        const SampledFunction& s = Ln[static_cast<size_t>(n)][static_cast<size_t>(seg)];
        return right_end ? s.values.back() : s.values.front();
    };
    auto end_slope = [&](int n, int seg, bool right_end) {
        const SampledFunction& s = Ln[static_cast<size_t>(n)][static_cast<size_t>(seg)];
        const std::vector<double> d = sampled_derivative(s.values, s.dx);
        return right_end ? d.back() : d.front();
    };

    for (int j = 1; j <= nmass; ++j) {
        const int ci = base + j - 1; // condition C^{ci} at a_j
        const int n_even = half_up(ci) + extra_orders;
        const int n_odd = std::max(0, half_up(ci) - 1) + extra_orders;
        for (int n = 0; n < n_even && n <= nmax; ++n) {
            const double lv = end_value(n, j - 1, true);
            const double rv = end_value(n, j, false);
            ConditionEntry e;
            e.junction = j;
            e.order = n;
            e.derivative_jump = false;
            e.diagnostic = n >= half_up(ci);
            e.residual = lv - rv;
            e.scale = 1.0 + std::max(std::abs(lv), std::abs(rv));
            e.pass = std::abs(e.residual) <= tol * e.scale;
            entries.push_back(e);
        }
        for (int n = 0; n < n_odd && n + 1 <= nmax; ++n) {
            const double ls = end_slope(n, j - 1, true);
            const double rs = end_slope(n, j, false);
            const double lval = end_value(n + 1, j, false);
            ConditionEntry e;
            e.junction = j;
            e.order = n;
            e.derivative_jump = true;
            e.diagnostic = n >= half_up(ci) - 1;
            e.residual = ls - (rs - sys.mass(j) * lval);
            e.scale =
                1.0 + std::max({std::abs(ls), std::abs(rs), std::abs(sys.mass(j) * lval)});
            e.pass = std::abs(e.residual) <= tol * e.scale;
            entries.push_back(e);
        }
    }

    const int ci = base + nmass; // condition C^{ci} at x = ell
    const int n_bc = half_up(ci) + extra_orders;
    for (int n = 0; n < n_bc && n <= nmax; ++n) {
        const double v = end_value(n, nmass, true);
        ConditionEntry e;
        e.junction = nmass + 1;
        e.order = n;
        e.derivative_jump = false;
        e.diagnostic = n >= half_up(ci);
        e.residual = v;
        e.scale = 1.0 + std::abs(v);
        e.pass = std::abs(e.residual) <= tol * e.scale;
        entries.push_back(e);
    }
}

} // namespace

CompatibilityReport check_compatibility(const std::vector<SampledFunction>& phi,
                                        const std::vector<SampledFunction>* psi,
                                        const StringSystem& sys, double tol,
                                        int extra_orders) {
    if (static_cast<int>(phi.size()) != sys.segment_count())
        throw PreconditionError("check_compatibility: segment count mismatch");

    CompatibilityReport rep;
    // phi must satisfy C^0_*: condition C^{j-1} at a_j and C^N at ell
    append_junction_conditions(rep.entries, phi, sys, /*base=*/0, tol, extra_orders);
    if (psi) {
        // velocities are one order lower: C^{-1}_*
        append_junction_conditions(rep.entries, *psi, sys, /*base=*/-1, tol, extra_orders);
    }
    for (const auto& e : rep.entries)
        if (!e.diagnostic && !e.pass) rep.all_pass = false;
    return rep;
}

std::string CompatibilityReport::to_json() const {
    std::ostringstream os;
    os << "{\"all_pass\": " << (all_pass ? "true" : "false") << ", \"conditions\": [";
    char buf[192];
    for (size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        std::snprintf(buf, sizeof(buf),
                      "%s{\"junction\": %d, \"order\": %d, \"type\": \"%s\", "
                      "\"residual\": %.16e, \"pass\": %s, \"diagnostic\": %s}",
                      i ? ", " : "", e.junction, e.order,
                      e.derivative_jump ? "flux" : "value", e.residual,
                      e.pass ? "true" : "false", e.diagnostic ? "true" : "false");
        os << buf;
    }
    os << "]}";
    return os.str();
}

double w0_inner(const std::vector<SampledFunction>& a,
                const std::vector<SampledFunction>& b, const StringSystem& sys) {
    if (static_cast<int>(a.size()) != sys.segment_count() || a.size() != b.size())
        throw PreconditionError("w0_inner: segment count mismatch");
    double acc = 0.0;
    for (int j = 0; j < sys.segment_count(); ++j) {
        const auto& fa = a[static_cast<size_t>(j)];
        const auto& fb = b[static_cast<size_t>(j)];
        if (fa.size() != fb.size())
            throw PreconditionError("w0_inner: sample count mismatch on a segment");
        if (fa.size() < static_cast<size_t>(2 * j + 2))
            throw PreconditionError("w0_inner: insufficient resolution on segment " +
                                    std::to_string(j));
        acc += l2_inner(fa.values, fb.values, fa.dx);
        if (j > 0) {
            const auto da = nth_derivative(fa.values, fa.dx, j);
            const auto db = nth_derivative(fb.values, fb.dx, j);
            acc += l2_inner(da, db, fa.dx);
        }
    }
    for (int j = 1; j <= sys.mass_count(); ++j)
        acc += sys.mass(j) * a[static_cast<size_t>(j)].values.front() *
               b[static_cast<size_t>(j)].values.front();
    return acc;
}

double norm_w0(const std::vector<SampledFunction>& phi, const StringSystem& sys) {
    return std::sqrt(std::max(0.0, w0_inner(phi, phi, sys)));
}

std::vector<double> theta_riesz_representative(const std::vector<double>& psi, double dx) {
    // -w'' + w = psi on (0, a1), w(0) = 0, w'(a1) = 0; tridiagonal solve with
    // a reflected ghost node at the Neumann end.
    const size_t n = psi.size() - 1; // nodes 0..n, unknowns 1..n
    std::vector<double> w(psi.size(), 0.0);
    if (n < 2) return w;
    const double h2 = dx * dx;
    std::vector<double> diag(n, 2.0 / h2 + 1.0), rhs(n);
    std::vector<double> lower(n, -1.0 / h2), upper(n, -1.0 / h2);
    for (size_t i = 1; i <= n; ++i) rhs[i - 1] = psi[i];
    lower[n - 1] = -2.0 / h2; // ghost w_{n+1} = w_{n-1}
    for (size_t i = 1; i < n; ++i) {
        const double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    w[n] = rhs[n - 1] / diag[n - 1];
    for (size_t i = n - 1; i >= 1; --i) {
        w[i] = (rhs[i - 1] - upper[i - 1] * w[i + 1]) / diag[i];
        if (i == 1) break;
    }
    return w;
}

double wm1_inner(const std::vector<SampledFunction>& a,
                 const std::vector<SampledFunction>& b, const StringSystem& sys) {
    if (static_cast<int>(a.size()) != sys.segment_count() || a.size() != b.size())
        throw PreconditionError("wm1_inner: segment count mismatch");
    const auto& fa0 = a[0];
    const auto& fb0 = b[0];
    if (fa0.size() != fb0.size() || fa0.size() < 4)
        throw PreconditionError("wm1_inner: insufficient resolution on segment 0");

    const std::vector<double> wa = theta_riesz_representative(fa0.values, fa0.dx);
    const std::vector<double> wb = theta_riesz_representative(fb0.values, fb0.dx);
    const auto dwa = sampled_derivative(wa, fa0.dx);
    const auto dwb = sampled_derivative(wb, fb0.dx);
    double acc = l2_inner(wa, wb, fa0.dx) + l2_inner(dwa, dwb, fa0.dx);

    for (int j = 1; j < sys.segment_count(); ++j) {
        const auto& fa = a[static_cast<size_t>(j)];
        const auto& fb = b[static_cast<size_t>(j)];
        if (fa.size() != fb.size() || fa.size() < static_cast<size_t>(std::max(4, 2 * j)))
            throw PreconditionError("wm1_inner: insufficient resolution on segment " +
                                    std::to_string(j));
        acc += l2_inner(fa.values, fb.values, fa.dx);
        if (j > 1) {
            const auto da = nth_derivative(fa.values, fa.dx, j - 1);
            const auto db = nth_derivative(fb.values, fb.dx, j - 1);
            acc += l2_inner(da, db, fa.dx);
        }
    }
    for (int j = 2; j <= sys.mass_count(); ++j)
        acc += sys.mass(j) * a[static_cast<size_t>(j)].values.front() *
               b[static_cast<size_t>(j)].values.front();
    return acc;
}

double norm_wm1(const std::vector<SampledFunction>& psi, const StringSystem& sys) {
    return std::sqrt(std::max(0.0, wm1_inner(psi, psi, sys)));
}

} // namespace beadstring
