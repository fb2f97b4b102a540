#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "dbmc/scenario.hpp"

using namespace dbmc;
using Catch::Matchers::WithinRel;

namespace {

// Published system-parameter set, scenario 1 (no reaction): 10^4 molecules,
// D = 1e-10 m^2/s, d = 5 um, r = 5 um, ts = 0.1 s, dt = 0.2 us, 100 reps.
ScenarioConfig table1() {
    ScenarioConfig c;
    c.environment.medium_half_extent = 20e-6;
    c.environment.diffusion_coefficient = 1e-10;
    c.geometry.distance_d = 5e-6;
    c.geometry.receiver_radius_r = 5e-6;
    c.transmission.molecules_N = 10000;
    c.transmission.symbol_period_ts = 0.1;
    c.simulation.timestep_dt = 0.2e-6;
    c.simulation.duration = 0.5;
    c.simulation.sample_interval = 1e-3;
    c.simulation.repetitions = 100;
    return c;
}

bool has(const std::vector<Violation>& v, const std::string& field,
         const std::string& msg) {
    for (const Violation& x : v)
        if (x.field == field && x.message.find(msg) != std::string::npos)
            return true;
    return false;
}

}  // namespace

TEST_CASE("published parameter set validates clean", "[scenario]") {
    auto v = validate(table1());
    for (const Violation& x : v) INFO(x.field << ": " << x.message);
    CHECK(v.empty());
}

TEST_CASE("degenerate numerics are flagged", "[scenario]") {
    auto c = table1();
    c.simulation.timestep_dt = 0.0;
    CHECK(has(validate(c), "simulation.timestep_dt", "timestep must be > 0"));

    c = table1();
    c.simulation.sample_interval = 0.3e-3;  // not a multiple of 0.2 us? it is;
    c.simulation.timestep_dt = 0.7e-3;      // make dt exceed the interval
    CHECK(has(validate(c), "simulation.sample_interval",
              "sample interval must be >= the timestep"));

    c = table1();
    c.simulation.timestep_dt = 0.3e-3;
    c.simulation.sample_interval = 1e-3;    // 3.33 steps
    CHECK(has(validate(c), "simulation.sample_interval", "integer multiple"));

    c = table1();
    c.simulation.duration = 0.5e-3;
    c.simulation.sample_interval = 1e-3;
    CHECK(has(validate(c), "simulation.duration",
              "duration must be >= the sample interval"));

    c = table1();
    c.simulation.repetitions = 0;
    CHECK(has(validate(c), "simulation.repetitions", "repetitions"));

    c = table1();
    c.transmission.a_priori_P1 = 1.5;
    CHECK(has(validate(c), "transmission.a_priori_P1", "[0, 1]"));
}

TEST_CASE("per-step displacement is bounded by the medium", "[scenario]") {
    // sigma = sqrt(2*1e-10*0.05) ~ 3.2 um against L/8 = 2.5 um: too coarse.
    auto c = table1();
    c.simulation.timestep_dt = 0.05;
    c.simulation.sample_interval = 0.1;
    CHECK(has(validate(c), "simulation.timestep_dt",
              "per-step displacement"));
    CHECK(validate(c).size() == 1);

    // sigma ~ 2.24 um stays under the cap.
    c.simulation.timestep_dt = 0.025;
    CHECK(validate(c).empty());

    // Same rule when D comes from the molecule radius (D ~ 2.18e-10).
    c = table1();
    c.environment.diffusion_coefficient.reset();
    c.environment.molecule_radius = 1e-9;
    c.simulation.timestep_dt = 0.05;
    c.simulation.sample_interval = 0.1;
    CHECK(has(validate(c), "simulation.timestep_dt",
              "per-step displacement"));
}

TEST_CASE("enzyme deployment ball must be positive and fit", "[scenario]") {
    auto c = table1();
    c.enzyme.deployment_radius = 0.0;
    CHECK(has(validate(c), "enzyme.deployment_radius",
              "deployment radius must be > 0"));

    // receiver centre sits d/2 from the middle: 2.5 + 18 > 20 um
    c.enzyme.deployment_radius = 18e-6;
    CHECK(has(validate(c), "enzyme.deployment_radius",
              "must fit inside the medium"));

    c.enzyme.deployment_radius = 5e-6;
    CHECK(validate(c).empty());
}

TEST_CASE("environment and geometry invariants", "[scenario]") {
    auto c = table1();
    c.environment.diffusion_coefficient.reset();
    CHECK(has(validate(c), "environment.diffusion_coefficient", "required"));

    c = table1();
    c.environment.diffusion_coefficient.reset();
    c.environment.molecule_radius = 1e-9;   // derivable -> clean
    CHECK(validate(c).empty());

    c = table1();
    c.environment.medium_half_extent = 9e-6;  // < d + r = 10 um
    CHECK(has(validate(c), "environment.medium_half_extent",
              "must exceed distance + receiver radius"));

    c = table1();
    c.geometry.receiver_volume_V = receiver_volume(c.geometry);
    CHECK(validate(c).empty());
    c.geometry.receiver_volume_V = *c.geometry.receiver_volume_V * 1.001;
    CHECK(has(validate(c), "geometry.receiver_volume_V", "inconsistent"));

    c = table1();
    c.geometry.distance_d = 0.0;
    CHECK(has(validate(c), "geometry.distance_d", "distance must be > 0"));
}

TEST_CASE("shell ordering rules", "[scenario]") {
    auto c = table1();
    c.photolysis.shells = {{6e-6, 1.0}, {11e-6, 0.5}, {16e-6, 0.7}};
    CHECK(has(validate(c), "photolysis.shells", "weights non-increasing"));

    c.photolysis.shells = {{6e-6, 1.0}, {6e-6, 0.5}};
    CHECK(has(validate(c), "photolysis.shells", "strictly increasing"));

    c.photolysis.shells = {{6e-6, 0.9}};
    CHECK(has(validate(c), "photolysis.shells", "first shell weight must be 1"));

    c.photolysis.shells = {{6e-6, 1.0}, {11e-6, 0.75}, {16e-6, 0.5}};
    CHECK(validate(c).empty());
}

TEST_CASE("photolysis scenario needs its inputs", "[scenario]") {
    auto c = table1();
    c.simulation.scenario = Scenario::photolysis;
    auto v = validate(c);
    CHECK(has(v, "photolysis.rate_J", "rate or a spectrum"));
    CHECK(has(v, "photolysis.shells", "at least one shell"));

    c.photolysis.rate_J = 10.0;
    c.photolysis.shells = default_shells(c.geometry);
    CHECK(validate(c).empty());
}

TEST_CASE("spectrum table invariants", "[scenario]") {
    auto c = table1();
    SpectrumTable t;
    t.rows = {{300.0, 0.5, 1e-21, 1e17}, {299.0, 0.5, 1e-21, 1e17}};
    c.photolysis.spectrum = t;
    CHECK(has(validate(c), "photolysis.spectrum", "strictly increasing"));

    t.rows = {{299.0, 0.5, 1e-21, 1e17}, {300.0, 0.5, -1e-21, 1e17}};
    c.photolysis.spectrum = t;
    CHECK(has(validate(c), "photolysis.spectrum", ">= 0"));

    t.rows.clear();
    c.photolysis.spectrum = t;
    CHECK(has(validate(c), "photolysis.spectrum", "at least one row"));
}

TEST_CASE("validate is pure and deterministic", "[scenario]") {
    auto c = table1();
    c.simulation.timestep_dt = 0.0;
    c.photolysis.shells = {{6e-6, 1.0}, {11e-6, 0.5}, {16e-6, 0.7}};
    auto a = validate(c), b = validate(c);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].field == b[i].field);
        CHECK(a[i].message == b[i].message);
    }
}

TEST_CASE("derived quantities", "[scenario]") {
    Geometry g;
    g.receiver_radius_r = 5e-6;
    g.distance_d = 5e-6;
    CHECK_THAT(receiver_volume(g), WithinRel(5.23598775598299e-16, 1e-12));
    g.receiver_volume_V = 1.0;      // explicit value wins
    CHECK(receiver_volume(g) == 1.0);

    Environment env;
    env.medium_half_extent = 10e-6;
    EnzymeKinetics k;
    k.enzyme_count = 8000;
    CHECK_THAT(enzyme_concentration(k, env), WithinRel(1e18, 1e-12));

    Geometry g2;
    g2.receiver_radius_r = 1e-6;
    g2.distance_d = 5e-6;
    auto shells = default_shells(g2);
    REQUIRE(shells.size() == 4);
    CHECK_THAT(shells[0].outer_radius, WithinRel(6e-6, 1e-12));
    CHECK_THAT(shells[3].outer_radius, WithinRel(21e-6, 1e-12));
    CHECK(shells[0].weight == 1.0);
    CHECK(shells[1].weight == 0.75);
    CHECK(shells[3].weight == 0.25);
}
