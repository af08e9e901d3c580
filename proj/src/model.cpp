#include "beadstring/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace beadstring {

using nlohmann::json;

Potential Potential::samples(std::vector<double> values) {
    if (values.size() < 2)
        throw ConfigError("sampled potential needs at least 2 values");
    return Potential{Kind::Samples, std::move(values)};
}

double Potential::eval(double xi, double seg_len) const {
    xi = std::clamp(xi, 0.0, seg_len);
    if (kind == Kind::Polynomial) {
        double v = 0.0;
        for (size_t i = data.size(); i-- > 0;)
            v = v * xi + data[i];
        return v;
    }
    // uniform samples over [0, seg_len], linear interpolation
    const size_t n = data.size() - 1;
    const double s = xi / seg_len * static_cast<double>(n);
    const size_t i = std::min(static_cast<size_t>(s), n - 1);
    const double w = s - static_cast<double>(i);
    return data[i] * (1.0 - w) + data[i + 1] * w;
}

bool Potential::is_zero() const {
    return std::all_of(data.begin(), data.end(), [](double v) { return v == 0.0; });
}

double Potential::derivative(int n, double xi, double seg_len) const {
    if (n == 0) return eval(xi, seg_len);
    if (kind == Kind::Polynomial) {
        // differentiate the coefficient list n times
        std::vector<double> c = data;
        for (int k = 0; k < n; ++k) {
            if (c.size() <= 1) return 0.0;
            for (size_t i = 1; i < c.size(); ++i)
                c[i - 1] = c[i] * static_cast<double>(i);
            c.pop_back();
        }
        double v = 0.0;
        for (size_t i = c.size(); i-- > 0;)
            v = v * std::clamp(xi, 0.0, seg_len) + c[i];
        return v;
    }
    if (n > 1) return 0.0; // piecewise linear
    const double h = seg_len / static_cast<double>(data.size() - 1);
    const double xm = std::clamp(xi - h, 0.0, seg_len);
    const double xp = std::clamp(xi + h, 0.0, seg_len);
    return (eval(xp, seg_len) - eval(xm, seg_len)) / (xp - xm);
}

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok)
            throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
    }
}

Potential parse_potential(const json& jp) {
    if (!jp.is_object())
        throw ConfigError("potential entry must be an object {kind, data}");
    reject_unknown_keys(jp, {"kind", "data"}, "potential");
    const std::string kind = jp.at("kind").get<std::string>();
    if (kind == "zero") return Potential::zero();
    if (kind == "constant") return Potential::constant(jp.at("data").get<double>());
    std::vector<double> vals = jp.at("data").get<std::vector<double>>();
    if (kind == "polynomial") return Potential::polynomial(std::move(vals));
    if (kind == "samples") return Potential::samples(std::move(vals));
    throw ConfigError("unknown potential kind \"" + kind + "\"");
}

} // namespace

RawConfig RawConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse failure: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");
    reject_unknown_keys(j, {"ell", "masses", "potentials"}, "config root");

    RawConfig cfg;
    try {
        cfg.ell = j.at("ell").get<double>();
        for (const auto& jm : j.at("masses")) {
            reject_unknown_keys(jm, {"a", "M"}, "mass entry");
            cfg.masses.push_back({jm.at("a").get<double>(), jm.at("M").get<double>()});
        }
        if (j.contains("potentials"))
            for (const auto& jp : j["potentials"])
                cfg.potentials.push_back(parse_potential(jp));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    return cfg;
}

RawConfig RawConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

double StringSystem::a(int j) const {
    if (j <= 0) return 0.0;
    if (j > mass_count()) return ell_;
    return masses_[static_cast<size_t>(j - 1)].position;
}

double StringSystem::mass(int j) const {
    return masses_.at(static_cast<size_t>(j - 1)).mass;
}

double StringSystem::min_segment_length() const {
    return *std::min_element(seg_len_.begin(), seg_len_.end());
}

bool StringSystem::potential_is_zero() const {
    return std::all_of(potentials_.begin(), potentials_.end(),
                       [](const Potential& p) { return p.is_zero(); });
}

double StringSystem::q(int seg, double x_global) const {
    return potentials_[static_cast<size_t>(seg)].eval(x_global - a(seg),
                                                      segment_length(seg));
}

StringSystem validate_system(const RawConfig& raw) {
    if (!(raw.ell > 0.0)) throw ConfigError("nonpositive length ell");

    StringSystem sys;
    sys.ell_ = raw.ell;
    sys.masses_ = raw.masses;

    double prev = 0.0;
    for (size_t i = 0; i < sys.masses_.size(); ++i) {
        const auto& m = sys.masses_[i];
        if (!(m.mass > 0.0)) throw ConfigError("nonpositive mass M_" + std::to_string(i + 1));
        if (!(m.position > prev))
            throw ConfigError("non-monotone positions: a_" + std::to_string(i + 1) +
                              " must exceed the previous interface");
        if (!(m.position < raw.ell))
            throw ConfigError("mass position a_" + std::to_string(i + 1) +
                              " must lie strictly inside (0, ell)");
        prev = m.position;
    }

    const int nseg = static_cast<int>(sys.masses_.size()) + 1;
    if (raw.potentials.empty()) {
        sys.potentials_.assign(static_cast<size_t>(nseg), Potential::zero());
    } else if (static_cast<int>(raw.potentials.size()) == nseg) {
        sys.potentials_ = raw.potentials;
    } else {
        throw ConfigError("expected " + std::to_string(nseg) + " potentials, got " +
                          std::to_string(raw.potentials.size()));
    }

    sys.seg_len_.resize(static_cast<size_t>(nseg));
    for (int j = 0; j < nseg; ++j) {
        const double lj = sys.a(j + 1) - sys.a(j);
        sys.seg_len_[static_cast<size_t>(j)] = lj;
        if (!(lj > 0.0)) throw ConfigError("degenerate segment " + std::to_string(j));
    }
    sys.lambda_step_ = 2.0 * sys.min_segment_length();

    for (int j = 0; j < nseg; ++j) {
        const int needed = std::max(0, j - 2);
        if (sys.potentials_[static_cast<size_t>(j)].smoothness() < needed)
            sys.warnings_.push_back("potential q_" + std::to_string(j) + " provides C^" +
                                    std::to_string(sys.potentials_[static_cast<size_t>(j)].smoothness()) +
                                    " but the regularity theory assumes C^" + std::to_string(needed));
    }
    return sys;
}

double SampledFunction::operator()(double x) const {
    if (values.empty()) return 0.0;
    const double s = (x - x0) / dx;
    if (s <= -1e-12 || s >= static_cast<double>(values.size() - 1) + 1e-12) return 0.0;
    const double sc = std::clamp(s, 0.0, static_cast<double>(values.size() - 1));
    const size_t i = std::min(static_cast<size_t>(sc), values.size() - 2);
    const double w = sc - static_cast<double>(i);
    return values[i] * (1.0 - w) + values[i + 1] * w;
}

SampledFunction SampledFunction::zeros(double x0, double dx, size_t n, Domain d, int seg) {
    SampledFunction f;
    f.x0 = x0;
    f.dx = dx;
    f.values.assign(n, 0.0);
    f.domain = d;
    f.segment = seg;
    return f;
}

int SystemGrid::total_intervals() const {
    int t = 0;
    for (int n : seg_nodes) t += n;
    return t;
}

int SystemGrid::node_of_interface(int j) const {
    int t = 0;
    for (int k = 0; k < j && k < static_cast<int>(seg_nodes.size()); ++k)
        t += seg_nodes[static_cast<size_t>(k)];
    return t;
}

SystemGrid fit_grid(const StringSystem& sys, double target_dx) {
    if (!(target_dx > 0.0)) throw ConfigError("target dx must be positive");
    const int n0 = std::max(1, static_cast<int>(std::ceil(sys.ell() / target_dx - 1e-9)));
    const int cap = 64 * n0 + 64;
    for (int n = n0; n <= cap; ++n) {
        const double dx = sys.ell() / static_cast<double>(n);
        bool ok = true;
        SystemGrid g;
        g.dx = dx;
        int used = 0;
        for (int j = 0; j < sys.segment_count(); ++j) {
            const double r = sys.segment_length(j) / dx;
            const int ri = static_cast<int>(std::lround(r));
            if (ri < 1 || std::abs(r - ri) > 1e-9 * n) { ok = false; break; }
            g.seg_nodes.push_back(ri);
            used += ri;
        }
        if (ok && used == n) return g;
    }
    throw ConfigError("no uniform grid places every mass on a node near dx = " +
                      std::to_string(target_dx) + "; use rational mass positions");
}

} // namespace beadstring
