#pragma once
// Run manifests: one JSON file per command invocation recording everything
// needed to reproduce it — the resolved config, the derived SI parameters,
// the seed, the tool version, and a checksum plus byte count for every
// emitted file. Checksums are FNV-1a 64 over the raw bytes.

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dbmc/analytic.hpp"
#include "dbmc/csv.hpp"
#include "dbmc/scenario.hpp"

namespace dbmc {

inline constexpr const char* kToolVersion = "1.0.0";

inline uint64_t fnv1a64(const char* data, size_t n) {
    uint64_t h = 1469598103934665603ull;
    for (size_t i = 0; i < n; ++i) {
        h ^= uint64_t(uint8_t(data[i]));
        h *= 1099511628211ull;
    }
    return h;
}

inline uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open for checksumming");
    uint64_t h = 1469598103934665603ull;
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= uint64_t(uint8_t(buf[i]));
            h *= 1099511628211ull;
        }
    }
    return h;
}

inline uint64_t file_size_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw IoError(path, "cannot open to measure size");
    return uint64_t(in.tellg());
}

// The full config in JSON form; optional fields appear only when set, so
// the snapshot is also a statement of which defaults were in play.
inline nlohmann::json config_to_json(const ScenarioConfig& c) {
    nlohmann::json j;
    j["environment"] = {
        {"temperature_K", c.environment.temperature_K},
        {"viscosity", c.environment.viscosity},
        {"medium_half_extent_m", c.environment.medium_half_extent},
    };
    if (c.environment.diffusion_coefficient)
        j["environment"]["diffusion_m2_per_s"] =
            *c.environment.diffusion_coefficient;
    if (c.environment.molecule_radius)
        j["environment"]["molecule_radius_m"] = *c.environment.molecule_radius;

    j["geometry"] = {
        {"distance_m", c.geometry.distance_d},
        {"receiver_radius_m", c.geometry.receiver_radius_r},
    };
    if (c.geometry.receiver_volume_V)
        j["geometry"]["receiver_volume_m3"] = *c.geometry.receiver_volume_V;

    j["transmission"] = {
        {"molecules", c.transmission.molecules_N},
        {"symbol_period_s", c.transmission.symbol_period_ts},
        {"p1", c.transmission.a_priori_P1},
    };

    j["enzyme"] = {
        {"count", c.enzyme.enzyme_count},
        {"binding_rate_m3_per_s", c.enzyme.binding_rate_k1},
        {"unbinding_rate_per_s", c.enzyme.unbinding_rate_km1},
        {"degradation_rate_per_s", c.enzyme.degradation_rate_k2},
    };
    if (c.enzyme.enzyme_D) j["enzyme"]["diffusion_m2_per_s"] = *c.enzyme.enzyme_D;
    if (c.enzyme.deployment_radius)
        j["enzyme"]["deployment_radius_m"] = *c.enzyme.deployment_radius;

    nlohmann::json ph;
    if (c.photolysis.rate_J) ph["rate_per_s"] = *c.photolysis.rate_J;
    if (c.photolysis.T_op) ph["light_on_time_s"] = *c.photolysis.T_op;
    ph["continuity"] =
        c.photolysis.continuity_mode == ContinuityMode::as_written
            ? "as-written"
            : "shifted";
    ph["shells"] = nlohmann::json::array();
    for (const Shell& s : c.photolysis.shells)
        ph["shells"].push_back({{"outer_radius_m", s.outer_radius},
                                {"weight", s.weight}});
    if (c.photolysis.spectrum) {
        nlohmann::json rows = nlohmann::json::array();
        for (const SpectrumRow& r : c.photolysis.spectrum->rows)
            rows.push_back({r.wavelength_nm, r.quantum_yield_phi,
                            r.cross_section_sigma, r.actinic_flux_F});
        ph["spectrum"] = {
            {"zenith_rad", c.photolysis.spectrum->zenith_angle_theta},
            {"rows", rows},
        };
    }
    j["photolysis"] = ph;

    const char* scenario = to_string(c.simulation.scenario);
    j["simulation"] = {
        {"scenario", scenario},
        {"enzyme_mode",
         c.simulation.enzyme_mode == EnzymeMode::microscopic ? "microscopic"
                                                             : "well-mixed"},
        {"timestep_s", c.simulation.timestep_dt},
        {"sample_interval_s", c.simulation.sample_interval},
        {"duration_s", c.simulation.duration},
        {"repetitions", c.simulation.repetitions},
        {"seed", c.simulation.master_seed},
    };
    return j;
}

// Everything downstream modules derive from the config before any random
// number is drawn; recorded so a re-run can be cross-checked numerically.
inline nlohmann::json resolved_parameters(const ScenarioConfig& c) {
    nlohmann::json r;
    double D = diffusion_of(c.environment);
    r["diffusion_m2_per_s"] = D;
    r["receiver_volume_m3"] = receiver_volume(c.geometry);
    r["peak_time_s"] = optimal_light_time(c.geometry.distance_d, D);
    if (c.simulation.scenario == Scenario::enzyme) {
        r["enzyme_concentration_per_m3"] =
            enzyme_concentration(c.enzyme, c.environment);
        double d_sum = D + c.enzyme.enzyme_D.value_or(D);
        r["binding_radius_m"] =
            d_sum > 0 ? c.enzyme.binding_rate_k1 / (4.0 * kPi * d_sum) : 0.0;
    }
    if (c.simulation.scenario == Scenario::photolysis) {
        r["photolysis_rate_per_s"] = resolve_photolysis_rate(c.photolysis);
        r["light_on_time_s"] =
            resolve_light_on_time(c.photolysis, c.geometry, c.environment);
    }
    return r;
}

struct RunManifest {
    std::string command;                 // subcommand plus notable flags
    uint64_t master_seed = 0;
    nlohmann::json config_snapshot;
    nlohmann::json resolved;
    std::vector<std::pair<std::string, double>> timings;   // name, seconds
    std::vector<std::string> output_paths;                 // files to record
};

// Writes the manifest, checksumming every listed output file. The manifest
// itself is not listed (it cannot contain its own checksum).
inline void write_manifest(const std::string& path, const RunManifest& m) {
    nlohmann::json j;
    j["tool"] = {{"name", "dbmc"}, {"version", kToolVersion}};
    j["command"] = m.command;
    j["master_seed"] = m.master_seed;
    j["config"] = m.config_snapshot;
    j["resolved"] = m.resolved;
    j["timings_s"] = nlohmann::json::object();
    for (const auto& [name, seconds] : m.timings) j["timings_s"][name] = seconds;
    j["outputs"] = nlohmann::json::array();
    for (const std::string& p : m.output_paths) {
        char hex[20];
        std::snprintf(hex, sizeof hex, "%016llx",
                      (unsigned long long)fnv1a64_file(p));
        std::string base = p;
        size_t slash = base.find_last_of('/');
        if (slash != std::string::npos) base = base.substr(slash + 1);
        j["outputs"].push_back({{"file", base},
                                {"bytes", file_size_bytes(p)},
                                {"fnv1a64", hex}});
    }
    auto out = detail::open_out(path);
    out << j.dump(2) << '\n';
    detail::finish(out, path);
}

}  // namespace dbmc
