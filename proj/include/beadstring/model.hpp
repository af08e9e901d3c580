#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "beadstring/errors.hpp"

namespace beadstring {

/// Segment potential q_j, defined on one inter-mass interval. Two encodings:
/// polynomial in the local coordinate xi = x - a_j, or uniform samples over
/// the closed segment with linear interpolation.
struct Potential {
    enum class Kind { Polynomial, Samples };

    Kind kind = Kind::Polynomial;
    std::vector<double> data; // poly coefficients (c0 + c1*xi + ...) or samples

    static Potential zero() { return Potential{Kind::Polynomial, {}}; }
    static Potential constant(double c) { return Potential{Kind::Polynomial, {c}}; }
    static Potential polynomial(std::vector<double> coeffs) {
        return Potential{Kind::Polynomial, std::move(coeffs)};
    }
    static Potential samples(std::vector<double> values);

    /// Evaluate at local coordinate xi in [0, seg_len]. Arguments outside the
    /// segment are clamped (constant extension).
    double eval(double xi, double seg_len) const;

    bool is_zero() const;

    /// Number of continuous derivatives the encoding can provide
    /// (polynomials are smooth; sampled data is only C^0).
    int smoothness() const { return kind == Kind::Polynomial ? 99 : 0; }

    /// d^n q / dx^n at local coordinate xi (exact for polynomials, finite
    /// differences for samples).
    double derivative(int n, double xi, double seg_len) const;
};

struct MassPoint {
    double position = 0.0; // a_j
    double mass = 0.0;     // M_j
};

struct RawConfig {
    double ell = 0.0;
    std::vector<MassPoint> masses;
    std::vector<Potential> potentials; // may be empty => all zero

    static RawConfig from_json_text(const std::string& text);
    static RawConfig from_json_file(const std::string& path);
};

/// Immutable, validated description of the string + attached masses.
/// Segment j is (a_j, a_{j+1}) with a_0 = 0 and a_{N+1} = ell.
class StringSystem {
public:
    int mass_count() const { return static_cast<int>(masses_.size()); }
    int segment_count() const { return mass_count() + 1; }
    double ell() const { return ell_; }

    /// Interface position: a(0) = 0, a(j) = j-th mass, a(N+1) = ell.
    double a(int j) const;
    double mass(int j) const; // M_j, 1-based
    double segment_length(int j) const { return seg_len_[static_cast<size_t>(j)]; }
    double min_segment_length() const;
    /// Step length of the control marching: 2 * min_j l_j.
    double lambda_step() const { return lambda_step_; }

    const Potential& potential(int seg) const { return potentials_[static_cast<size_t>(seg)]; }
    bool potential_is_zero() const;
    /// q at global coordinate x (clamped into the given segment).
    double q(int seg, double x_global) const;

    const std::vector<std::string>& warnings() const { return warnings_; }

    friend StringSystem validate_system(const RawConfig&);

private:
    double ell_ = 0.0;
    std::vector<MassPoint> masses_;
    std::vector<Potential> potentials_;
    std::vector<double> seg_len_;
    double lambda_step_ = 0.0;
    std::vector<std::string> warnings_;
};

/// Validates a raw configuration and derives segment lengths and the step
/// length. Throws ConfigError on violated invariants; smoothness shortfalls
/// only produce warnings.
StringSystem validate_system(const RawConfig& raw);

/// Uniformly sampled scalar function of one variable.
struct SampledFunction {
    enum class Domain { Space, Time };

    double x0 = 0.0;
    double dx = 0.0;
    std::vector<double> values;
    Domain domain = Domain::Time;
    int segment = -1; // for Domain::Space, which segment it lives on

    size_t size() const { return values.size(); }
    double grid(size_t i) const { return x0 + static_cast<double>(i) * dx; }
    double back_x() const { return grid(values.empty() ? 0 : values.size() - 1); }
    /// Linear interpolation; zero outside the sampled range.
    double operator()(double x) const;

    static SampledFunction zeros(double x0, double dx, size_t n,
                                 Domain d = Domain::Time, int seg = -1);
};

/// Terminal state of the coupled system: per-segment displacement and
/// velocity samples (endpoints included as one-sided limits) plus the mass
/// states. h'_j is a diagnostic only; it is never target data.
struct StateSnapshot {
    double time = 0.0;
    std::vector<SampledFunction> u;  // size N+1, Domain::Space
    std::vector<SampledFunction> ut; // size N+1
    std::vector<double> mass_pos;    // h_j(T), size N
    std::vector<double> mass_vel;    // h'_j(T), size N (diagnostic)
};

/// Uniform grid with every interface on a node. seg_nodes[j] is the number
/// of dx-intervals inside segment j.
struct SystemGrid {
    double dx = 0.0;
    std::vector<int> seg_nodes;

    int total_intervals() const;
    int node_of_interface(int j) const; // global node index of a_j
};

/// Finds the coarsest uniform dx <= target_dx that places every a_j exactly
/// on a node. Throws ConfigError if no such grid exists within the search cap
/// (irrational position ratios).
SystemGrid fit_grid(const StringSystem& sys, double target_dx);

} // namespace beadstring
