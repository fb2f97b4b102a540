#pragma once
// Parameter model shared by every other component: physical environment,
// geometry, reaction kinetics, transmission settings, and numerical
// controls, plus the validator that turns invariant breaches into data.
//
// Unit convention: strict SI throughout (meters, seconds, kelvin,
// kg·m⁻¹·s⁻¹, m³·s⁻¹ for second-order rates, plain counts). Config files
// may use µm/ms and friends; the parser converts before these types are
// constructed.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dbmc {

enum class Scenario { none, enzyme, photolysis };

enum class EnzymeMode { microscopic, well_mixed };

// exp(-J·t) exactly as the lower-bound model is stated (discontinuous at
// T_op) versus exp(-J·(t - T_op)) which restores continuity.
enum class ContinuityMode { as_written, shifted };

inline const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::none: return "none";
        case Scenario::enzyme: return "enzyme";
        case Scenario::photolysis: return "photolysis";
    }
    return "?";
}

// Unbounded-in-spirit medium realized as a cube [-L, L]^3 with reflecting
// walls; the diffusion coefficient is given directly or derived from the
// molecule radius via Stokes-Einstein (see analytic.hpp).
struct Environment {
    double temperature_K = 298.0;
    double viscosity = 1e-3;                       // kg/(m·s)
    double medium_half_extent = 0.0;               // m
    std::optional<double> diffusion_coefficient;   // m^2/s
    std::optional<double> molecule_radius;         // m
};

struct Geometry {
    double distance_d = 0.0;                       // m, transmitter to center
    double receiver_radius_r = 0.0;                // m
    std::optional<double> receiver_volume_V;       // m^3, (4/3)πr³ if absent
};

inline double receiver_volume(const Geometry& g) {
    if (g.receiver_volume_V) return *g.receiver_volume_V;
    return 4.0 / 3.0 * 3.14159265358979323846 * g.receiver_radius_r *
           g.receiver_radius_r * g.receiver_radius_r;
}

struct EnzymeKinetics {
    uint64_t enzyme_count = 0;
    double binding_rate_k1 = 0.0;                  // m^3/s, second order
    double unbinding_rate_km1 = 0.0;               // 1/s
    double degradation_rate_k2 = 0.0;              // 1/s
    std::optional<double> enzyme_D;                // m^2/s; molecule D if absent
    // Enzymes are seeded uniformly over the whole medium unless a
    // deployment radius is given, in which case they start inside a ball
    // of that radius centred on the receiver (localized deployment).
    std::optional<double> deployment_radius;       // m
};

// Total enzyme concentration (bound + free) over the medium volume.
inline double enzyme_concentration(const EnzymeKinetics& k,
                                   const Environment& env) {
    double side = 2.0 * env.medium_half_extent;
    return double(k.enzyme_count) / (side * side * side);
}

struct Shell {
    double outer_radius = 0.0;                     // m
    double weight = 0.0;                           // [0, 1]
};

// Light-intensity falloff: concentric shells around the receiver center,
// weight 1 innermost, non-increasing outward, zero beyond the last shell.
// Radii/weights here are modeling choices, not measured optics.
inline std::vector<Shell> default_shells(const Geometry& g) {
    std::vector<Shell> s;
    for (int k = 1; k <= 4; ++k)
        s.push_back({g.receiver_radius_r + k * g.distance_d,
                     1.0 - 0.25 * (k - 1)});
    return s;
}

// One absorption-spectrum row; flux is per nm of wavelength.
struct SpectrumRow {
    double wavelength_nm = 0.0;
    double quantum_yield_phi = 0.0;
    double cross_section_sigma = 0.0;              // m^2
    double actinic_flux_F = 0.0;                   // photons/(m^2·s·nm)
};

struct SpectrumTable {
    std::vector<SpectrumRow> rows;
    double zenith_angle_theta = 0.0;               // rad, metadata only
};

struct PhotolysisConfig {
    std::optional<double> rate_J;                  // 1/s; else from spectrum
    std::optional<SpectrumTable> spectrum;
    std::optional<double> T_op;                    // s; else d²/(6D)
    std::vector<Shell> shells;
    ContinuityMode continuity_mode = ContinuityMode::as_written;
};

struct TransmissionConfig {
    uint64_t molecules_N = 0;
    double symbol_period_ts = 0.0;                 // s
    double a_priori_P1 = 0.5;
};

struct SimulationConfig {
    double timestep_dt = 0.0;                      // s
    double duration = 0.0;                         // s
    double sample_interval = 0.0;                  // s
    uint32_t repetitions = 1;
    uint64_t master_seed = 0;
    Scenario scenario = Scenario::none;
    EnzymeMode enzyme_mode = EnzymeMode::microscopic;
};

struct ScenarioConfig {
    Environment environment;
    Geometry geometry;
    TransmissionConfig transmission;
    EnzymeKinetics enzyme;
    PhotolysisConfig photolysis;
    SimulationConfig simulation;
};

// One invariant breach; `field` is the config path, dotted.
struct Violation {
    std::string field;
    std::string message;
};

// Pure check of every invariant; an empty result means downstream
// operations will not hit precondition errors on this config.
inline std::vector<Violation> validate(const ScenarioConfig& c) {
    std::vector<Violation> v;
    auto add = [&](const char* field, const char* msg) {
        v.push_back({field, msg});
    };

    const Environment& env = c.environment;
    if (!(env.temperature_K > 0))
        add("environment.temperature_K", "temperature must be > 0");
    if (!(env.viscosity > 0))
        add("environment.viscosity", "viscosity must be > 0");
    if (!(env.medium_half_extent > 0))
        add("environment.medium_half_extent", "medium half-extent must be > 0");
    if (!env.diffusion_coefficient && !env.molecule_radius)
        add("environment.diffusion_coefficient",
            "either a diffusion coefficient or a molecule radius is required");
    if (env.diffusion_coefficient && !(*env.diffusion_coefficient > 0))
        add("environment.diffusion_coefficient",
            "diffusion coefficient must be > 0");
    if (env.molecule_radius && !(*env.molecule_radius > 0))
        add("environment.molecule_radius", "molecule radius must be > 0");

    const Geometry& g = c.geometry;
    if (!(g.distance_d > 0))
        add("geometry.distance_d", "distance must be > 0");
    if (!(g.receiver_radius_r > 0))
        add("geometry.receiver_radius_r", "receiver radius must be > 0");
    if (g.receiver_volume_V) {
        double expect = 4.0 / 3.0 * 3.14159265358979323846 *
                        g.receiver_radius_r * g.receiver_radius_r *
                        g.receiver_radius_r;
        if (std::abs(*g.receiver_volume_V - expect) > 1e-12 * expect)
            add("geometry.receiver_volume_V",
                "receiver volume inconsistent with receiver radius");
    }
    if (env.medium_half_extent > 0 &&
        !(env.medium_half_extent > g.distance_d + g.receiver_radius_r))
        add("environment.medium_half_extent",
            "medium half-extent must exceed distance + receiver radius");

    const EnzymeKinetics& e = c.enzyme;
    if (e.binding_rate_k1 < 0)
        add("enzyme.binding_rate_k1", "binding rate must be >= 0");
    if (e.unbinding_rate_km1 < 0)
        add("enzyme.unbinding_rate_km1", "unbinding rate must be >= 0");
    if (e.degradation_rate_k2 < 0)
        add("enzyme.degradation_rate_k2", "degradation rate must be >= 0");
    if (e.enzyme_D && !(*e.enzyme_D >= 0))
        add("enzyme.enzyme_D", "enzyme diffusion coefficient must be >= 0");
    if (e.deployment_radius) {
        if (!(*e.deployment_radius > 0))
            add("enzyme.deployment_radius", "deployment radius must be > 0");
        else if (c.geometry.distance_d / 2.0 + *e.deployment_radius >
                 c.environment.medium_half_extent)
            add("enzyme.deployment_radius",
                "deployment ball must fit inside the medium");
    }

    const PhotolysisConfig& p = c.photolysis;
    if (p.rate_J && *p.rate_J < 0)
        add("photolysis.rate_J", "photolysis rate must be >= 0");
    if (p.T_op && !(*p.T_op > 0))
        add("photolysis.T_op", "light-on time must be > 0");
    for (size_t i = 0; i < p.shells.size(); ++i) {
        const Shell& s = p.shells[i];
        if (!(s.outer_radius > 0)) {
            add("photolysis.shells", "shell radii must be > 0");
            break;
        }
        if (i > 0 && !(s.outer_radius > p.shells[i - 1].outer_radius)) {
            add("photolysis.shells", "shell radii must be strictly increasing");
            break;
        }
    }
    for (size_t i = 0; i < p.shells.size(); ++i) {
        const Shell& s = p.shells[i];
        if (s.weight < 0 || s.weight > 1) {
            add("photolysis.shells", "shell weights must be in [0, 1]");
            break;
        }
        if (i == 0 && s.weight != 1.0) {
            add("photolysis.shells", "first shell weight must be 1");
            break;
        }
        if (i > 0 && s.weight > p.shells[i - 1].weight) {
            add("photolysis.shells", "weights non-increasing");
            break;
        }
    }
    if (p.spectrum) {
        const SpectrumTable& t = *p.spectrum;
        if (t.rows.empty())
            add("photolysis.spectrum", "spectrum table needs at least one row");
        for (size_t i = 0; i < t.rows.size(); ++i) {
            const SpectrumRow& r = t.rows[i];
            if (r.wavelength_nm < 0 || r.quantum_yield_phi < 0 ||
                r.cross_section_sigma < 0 || r.actinic_flux_F < 0) {
                add("photolysis.spectrum", "spectrum values must be >= 0");
                break;
            }
            if (i > 0 && !(r.wavelength_nm > t.rows[i - 1].wavelength_nm)) {
                add("photolysis.spectrum",
                    "wavelengths must be strictly increasing");
                break;
            }
        }
    }
    if (c.simulation.scenario == Scenario::photolysis) {
        if (!p.rate_J && !p.spectrum)
            add("photolysis.rate_J",
                "photolysis scenario needs a rate or a spectrum table");
        if (p.shells.empty())
            add("photolysis.shells",
                "photolysis scenario needs at least one shell");
    }

    const TransmissionConfig& tx = c.transmission;
    if (!(tx.symbol_period_ts > 0))
        add("transmission.symbol_period_ts", "symbol period must be > 0");
    if (tx.a_priori_P1 < 0 || tx.a_priori_P1 > 1)
        add("transmission.a_priori_P1", "a-priori P1 must be in [0, 1]");

    const SimulationConfig& s = c.simulation;
    if (!(s.timestep_dt > 0)) {
        add("simulation.timestep_dt", "timestep must be > 0");
    } else {
        if (!(s.timestep_dt <= s.sample_interval))
            add("simulation.sample_interval",
                "sample interval must be >= the timestep");
        // Sampling happens on whole steps, so the interval must be a whole
        // number of timesteps.
        double k = std::round(s.sample_interval / s.timestep_dt);
        if (std::abs(s.sample_interval - k * s.timestep_dt) >
            1e-9 * s.sample_interval)
            add("simulation.sample_interval",
                "sample interval must be an integer multiple of the timestep");
    }
    if (!(s.sample_interval <= s.duration))
        add("simulation.duration", "duration must be >= the sample interval");
    if (s.repetitions < 1)
        add("simulation.repetitions", "repetitions must be >= 1");

    // The engine folds positions back into the box once per step; that is
    // exact only while one step is a small fraction of the half-extent.
    // Capping sigma at an eighth pushes escapes out to 16-sigma draws.
    double D = 0.0;
    if (env.diffusion_coefficient) {
        D = *env.diffusion_coefficient;
    } else if (env.molecule_radius && *env.molecule_radius > 0 &&
               env.temperature_K > 0 && env.viscosity > 0) {
        D = 1.380649e-23 * env.temperature_K /
            (6.0 * 3.14159265358979323846 * env.viscosity *
             *env.molecule_radius);
    }
    if (D > 0 && s.timestep_dt > 0 && env.medium_half_extent > 0 &&
        std::sqrt(2.0 * D * s.timestep_dt) > env.medium_half_extent / 8.0)
        add("simulation.timestep_dt",
            "per-step displacement must not exceed an eighth of the medium "
            "half-extent");

    return v;
}

}  // namespace dbmc
