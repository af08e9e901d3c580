#include <doctest.h>

#include "beadstring/model.hpp"

using namespace beadstring;

namespace {

RawConfig one_mass_cfg() {
    RawConfig cfg;
    cfg.ell = 1.0;
    cfg.masses = {{0.5, 1.0}};
    return cfg;
}

} // namespace

TEST_SUITE("model") {

TEST_CASE("one mass at the midpoint validates with the expected geometry") {
    const StringSystem sys = validate_system(one_mass_cfg());
    CHECK(sys.mass_count() == 1);
    CHECK(sys.segment_length(0) == doctest::Approx(0.5));
    CHECK(sys.segment_length(1) == doctest::Approx(0.5));
    CHECK(sys.lambda_step() == doctest::Approx(1.0));
    CHECK(sys.potential_is_zero());
}

TEST_CASE("non-monotone mass positions are rejected") {
    RawConfig cfg;
    cfg.ell = 1.0;
    cfg.masses = {{0.6, 1.0}, {0.4, 1.0}};
    CHECK_THROWS_WITH_AS(validate_system(cfg),
                         doctest::Contains("non-monotone"), ConfigError);
}

TEST_CASE("nonpositive mass is rejected") {
    RawConfig cfg;
    cfg.ell = 1.0;
    cfg.masses = {{0.5, 0.0}};
    CHECK_THROWS_WITH_AS(validate_system(cfg),
                         doctest::Contains("nonpositive mass"), ConfigError);
}

TEST_CASE("nonpositive length and out-of-range positions are rejected") {
    RawConfig bad_len;
    bad_len.ell = 0.0;
    CHECK_THROWS_AS(validate_system(bad_len), ConfigError);

    RawConfig outside;
    outside.ell = 1.0;
    outside.masses = {{1.0, 1.0}};
    CHECK_THROWS_AS(validate_system(outside), ConfigError);
}

TEST_CASE("validation is idempotent on the derived quantities") {
    const StringSystem a = validate_system(one_mass_cfg());
    RawConfig again;
    again.ell = a.ell();
    for (int j = 1; j <= a.mass_count(); ++j) again.masses.push_back({a.a(j), a.mass(j)});
    for (int j = 0; j < a.segment_count(); ++j) again.potentials.push_back(a.potential(j));
    const StringSystem b = validate_system(again);
    CHECK(b.lambda_step() == a.lambda_step());
    for (int j = 0; j < a.segment_count(); ++j)
        CHECK(b.segment_length(j) == a.segment_length(j));
}

TEST_CASE("lambda_step is twice the smallest gap including the endpoints") {
    RawConfig cfg;
    cfg.ell = 2.0;
    cfg.masses = {{0.3, 1.0}, {1.0, 2.0}};
    const StringSystem sys = validate_system(cfg);
    // gaps: 0.3, 0.7, 1.0
    CHECK(sys.lambda_step() == doctest::Approx(0.6));
}

TEST_CASE("potential encodings evaluate consistently") {
    const Potential p = Potential::polynomial({1.0, 2.0, 3.0}); // 1 + 2xi + 3xi^2
    CHECK(p.eval(0.5, 1.0) == doctest::Approx(1.0 + 1.0 + 0.75));
    CHECK(p.derivative(1, 0.5, 1.0) == doctest::Approx(2.0 + 3.0));
    CHECK(p.derivative(2, 0.5, 1.0) == doctest::Approx(6.0));

    std::vector<double> vals;
    for (int i = 0; i <= 10; ++i) {
        const double xi = i / 10.0;
        vals.push_back(1.0 + 2.0 * xi);
    }
    const Potential s = Potential::samples(vals);
    CHECK(s.eval(0.35, 1.0) == doctest::Approx(1.7));
    CHECK(s.eval(-0.5, 1.0) == doctest::Approx(1.0)); // clamped
    CHECK(s.smoothness() == 0);
}

TEST_CASE("smoothness shortfall warns instead of erroring") {
    RawConfig cfg;
    cfg.ell = 2.0;
    cfg.masses = {{0.4, 1.0}, {0.8, 1.0}, {1.2, 1.0}, {1.6, 1.0}};
    cfg.potentials.assign(5, Potential::samples({0.0, 1.0, 0.0}));
    const StringSystem sys = validate_system(cfg);
    CHECK(!sys.warnings().empty()); // q_3, q_4 want C^1, C^2
}

TEST_CASE("json config parses and rejects unknown keys") {
    const std::string good = R"({"ell": 1.0,
        "masses": [{"a": 0.4, "M": 1.0}],
        "potentials": [{"kind": "constant", "data": 1.0},
                       {"kind": "zero", "data": null}]})";
    const RawConfig cfg = RawConfig::from_json_text(good);
    const StringSystem sys = validate_system(cfg);
    CHECK(sys.mass_count() == 1);
    CHECK(sys.q(0, 0.2) == doctest::Approx(1.0));
    CHECK(sys.q(1, 0.7) == doctest::Approx(0.0));

    const std::string bad = R"({"ell": 1.0, "masses": [], "color": "red"})";
    CHECK_THROWS_WITH_AS(RawConfig::from_json_text(bad),
                         doctest::Contains("unknown key"), ConfigError);

    const std::string bad_mass = R"({"ell": 1.0, "masses": [{"a": 0.4, "M": 1, "x": 2}]})";
    CHECK_THROWS_AS(RawConfig::from_json_text(bad_mass), ConfigError);
}

TEST_CASE("sampled function interpolates linearly and vanishes outside") {
    SampledFunction f = SampledFunction::zeros(0.0, 0.25, 5);
    f.values = {0.0, 1.0, 2.0, 1.0, 0.0};
    CHECK(f(0.125) == doctest::Approx(0.5));
    CHECK(f(0.5) == doctest::Approx(2.0));
    CHECK(f(2.0) == 0.0);
    CHECK(f(-1.0) == 0.0);
}

TEST_CASE("fit_grid places every interface on a node") {
    RawConfig cfg;
    cfg.ell = 1.0;
    cfg.masses = {{0.4, 1.0}};
    const StringSystem sys = validate_system(cfg);
    const SystemGrid g = fit_grid(sys, 0.013);
    CHECK(g.dx <= 0.013);
    CHECK(g.seg_nodes.size() == 2);
    CHECK(g.seg_nodes[0] * g.dx == doctest::Approx(0.4));
    CHECK(g.node_of_interface(1) == g.seg_nodes[0]);

    RawConfig three;
    three.ell = 1.0;
    three.masses = {{0.3, 1.0}, {0.66, 0.5}};
    const SystemGrid g3 = fit_grid(validate_system(three), 0.01);
    CHECK(g3.seg_nodes[0] * g3.dx == doctest::Approx(0.3));
    CHECK((g3.seg_nodes[0] + g3.seg_nodes[1]) * g3.dx == doctest::Approx(0.66));
}

} // TEST_SUITE
