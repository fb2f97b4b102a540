#pragma once
// Plain-text config files -> ScenarioConfig. The format is INI-style:
// [section] headers, one `key = value` per line; '#' or ';' starts a
// comment that runs to the end of the line, so values cannot contain
// those characters. Lengths and times accept a unit suffix (m/mm/um/µm/nm
// and s/ms/us/µs/ns); everything else is strict SI as documented per key.
// Every parse error carries the line number and the dotted field path.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbmc/scenario.hpp"

namespace dbmc {

struct ConfigError : std::runtime_error {
    int line;
    std::string field;
    ConfigError(const std::string& origin, int line_no,
                const std::string& field_path, const std::string& message)
        : std::runtime_error(origin + ":" + std::to_string(line_no) + ": " +
                             (field_path.empty() ? "" : field_path + ": ") +
                             message),
          line(line_no), field(field_path) {}
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

// Unit tables. "µ" is accepted as a synonym for "u" in both families.
inline bool length_unit(const std::string& u, double& factor) {
    if (u == "m") factor = 1.0;
    else if (u == "mm") factor = 1e-3;
    else if (u == "um" || u == "\xc2\xb5m") factor = 1e-6;
    else if (u == "nm") factor = 1e-9;
    else return false;
    return true;
}

inline bool time_unit(const std::string& u, double& factor) {
    if (u == "s") factor = 1.0;
    else if (u == "ms") factor = 1e-3;
    else if (u == "us" || u == "\xc2\xb5s") factor = 1e-6;
    else if (u == "ns") factor = 1e-9;
    else return false;
    return true;
}

}  // namespace detail

// parse_config output: the config plus the not-yet-loaded spectrum CSV
// reference, which load_config resolves relative to the config file.
struct ParsedConfig {
    ScenarioConfig config;
    std::optional<std::string> spectrum_path;
    std::optional<double> zenith;
    int spectrum_line = 0;
    int zenith_line = 0;
};

// Parses config text. `origin` names the source in error messages (a file
// path or a pseudo-name like "<preset>"). Purely syntactic: semantic rules
// stay in validate(), so a parsed config may still carry violations.
inline ParsedConfig parse_config(const std::string& text,
                                 const std::string& origin) {
    ParsedConfig out;
    ScenarioConfig& cfg = out.config;
    std::string section;
    int line_no = 0;

    auto fail = [&](const std::string& field, const std::string& msg) {
        throw ConfigError(origin, line_no, field, msg);
    };

    auto number = [&](const std::string& field, const std::string& tok) {
        size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            fail(field, "expected a number, got '" + tok + "'");
        }
        if (used != tok.size())
            fail(field, "expected a number, got '" + tok + "'");
        return v;
    };

    // `value` is one number with an optional unit token from one family.
    auto with_unit = [&](const std::string& field, const std::string& value,
                         bool (*unit)(const std::string&, double&),
                         const char* family) {
        auto toks = detail::split_ws(value);
        if (toks.empty()) fail(field, "empty value");
        double v = number(field, toks[0]);
        if (toks.size() == 1) return v;
        double factor = 1.0;
        if (toks.size() > 2 || !unit(toks[1], factor))
            fail(field, std::string("expected '<number> [") + family +
                            "]', got '" + value + "'");
        return v * factor;
    };

    auto plain = [&](const std::string& field, const std::string& value) {
        auto toks = detail::split_ws(value);
        if (toks.size() != 1) fail(field, "expected a bare number");
        return number(field, toks[0]);
    };

    auto count = [&](const std::string& field, const std::string& value) {
        auto toks = detail::split_ws(value);
        if (toks.size() != 1) fail(field, "expected a non-negative integer");
        const std::string& t = toks[0];
        if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char c) {
                return std::isdigit(c);
            }))
            fail(field, "expected a non-negative integer, got '" + t + "'");
        try {
            return std::stoull(t);
        } catch (const std::exception&) {
            fail(field, "integer out of range: '" + t + "'");
        }
        return 0ull;  // unreachable
    };

    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        size_t hash = raw.find_first_of("#;");
        std::string line =
            detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail("", "unterminated section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section != "environment" && section != "geometry" &&
                section != "transmission" && section != "enzyme" &&
                section != "photolysis" && section != "simulation")
                fail(section, "unknown section");
            continue;
        }

        size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail(section, "expected 'key = value' or a [section] header");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (section.empty()) fail(key, "key outside any [section]");
        if (key.empty()) fail(section, "missing key before '='");
        std::string field = section + "." + key;
        if (value.empty()) fail(field, "missing value");

        auto length = [&] {
            return with_unit(field, value, detail::length_unit,
                             "m|mm|um|nm");
        };
        auto duration = [&] {
            return with_unit(field, value, detail::time_unit, "s|ms|us|ns");
        };

        if (section == "environment") {
            if (key == "temperature") {
                auto toks = detail::split_ws(value);
                if (toks.size() == 2 && toks[1] == "K")
                    cfg.environment.temperature_K = number(field, toks[0]);
                else
                    cfg.environment.temperature_K = plain(field, value);
            } else if (key == "viscosity") {
                cfg.environment.viscosity = plain(field, value);
            } else if (key == "half_extent") {
                cfg.environment.medium_half_extent = length();
            } else if (key == "diffusion") {
                cfg.environment.diffusion_coefficient = plain(field, value);
            } else if (key == "molecule_radius") {
                cfg.environment.molecule_radius = length();
            } else {
                fail(field, "unknown key");
            }
        } else if (section == "geometry") {
            if (key == "distance") cfg.geometry.distance_d = length();
            else if (key == "receiver_radius")
                cfg.geometry.receiver_radius_r = length();
            else if (key == "receiver_volume")
                cfg.geometry.receiver_volume_V = plain(field, value);
            else fail(field, "unknown key");
        } else if (section == "transmission") {
            if (key == "molecules")
                cfg.transmission.molecules_N = count(field, value);
            else if (key == "symbol_period")
                cfg.transmission.symbol_period_ts = duration();
            else if (key == "p1")
                cfg.transmission.a_priori_P1 = plain(field, value);
            else fail(field, "unknown key");
        } else if (section == "enzyme") {
            if (key == "count") cfg.enzyme.enzyme_count = count(field, value);
            else if (key == "binding_rate")
                cfg.enzyme.binding_rate_k1 = plain(field, value);
            else if (key == "unbinding_rate")
                cfg.enzyme.unbinding_rate_km1 = plain(field, value);
            else if (key == "degradation_rate")
                cfg.enzyme.degradation_rate_k2 = plain(field, value);
            else if (key == "diffusion")
                cfg.enzyme.enzyme_D = plain(field, value);
            else if (key == "deployment_radius")
                cfg.enzyme.deployment_radius = length();
            else fail(field, "unknown key");
        } else if (section == "photolysis") {
            if (key == "rate") {
                cfg.photolysis.rate_J = plain(field, value);
            } else if (key == "light_on_time") {
                cfg.photolysis.T_op = duration();
            } else if (key == "spectrum") {
                // A path, loaded by load_config relative to the config file.
                out.spectrum_path = value;
                out.spectrum_line = line_no;
            } else if (key == "zenith") {
                out.zenith = plain(field, value);
                out.zenith_line = line_no;
            } else if (key == "shell") {
                auto toks = detail::split_ws(value);
                Shell s;
                if (toks.size() == 2) {
                    s.outer_radius = number(field, toks[0]);
                    s.weight = number(field, toks[1]);
                } else if (toks.size() == 3) {
                    double factor = 1.0;
                    if (!detail::length_unit(toks[1], factor))
                        fail(field, "unknown length unit '" + toks[1] + "'");
                    s.outer_radius = number(field, toks[0]) * factor;
                    s.weight = number(field, toks[2]);
                } else {
                    fail(field, "expected '<radius> [unit] <weight>'");
                }
                cfg.photolysis.shells.push_back(s);
            } else if (key == "continuity") {
                if (value == "as-written")
                    cfg.photolysis.continuity_mode = ContinuityMode::as_written;
                else if (value == "shifted")
                    cfg.photolysis.continuity_mode = ContinuityMode::shifted;
                else
                    fail(field, "expected 'as-written' or 'shifted'");
            } else {
                fail(field, "unknown key");
            }
        } else if (section == "simulation") {
            if (key == "scenario") {
                if (value == "none") cfg.simulation.scenario = Scenario::none;
                else if (value == "enzyme")
                    cfg.simulation.scenario = Scenario::enzyme;
                else if (value == "photolysis")
                    cfg.simulation.scenario = Scenario::photolysis;
                else fail(field, "expected 'none', 'enzyme' or 'photolysis'");
            } else if (key == "enzyme_mode") {
                if (value == "microscopic")
                    cfg.simulation.enzyme_mode = EnzymeMode::microscopic;
                else if (value == "well-mixed")
                    cfg.simulation.enzyme_mode = EnzymeMode::well_mixed;
                else fail(field, "expected 'microscopic' or 'well-mixed'");
            } else if (key == "timestep") {
                cfg.simulation.timestep_dt = duration();
            } else if (key == "sample_interval") {
                cfg.simulation.sample_interval = duration();
            } else if (key == "duration") {
                cfg.simulation.duration = duration();
            } else if (key == "repetitions") {
                uint64_t r = count(field, value);
                if (r > 0xffffffffull) fail(field, "repetitions too large");
                cfg.simulation.repetitions = uint32_t(r);
            } else if (key == "seed") {
                cfg.simulation.master_seed = count(field, value);
            } else {
                fail(field, "unknown key");
            }
        }
    }
    return out;
}

// Spectrum CSV: one `wavelength_nm,quantum_yield,cross_section_m2,
// actinic_flux` row per line, a header line allowed, '#' comments skipped.
inline SpectrumTable load_spectrum_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path, 0, "photolysis.spectrum",
                          "cannot open spectrum file");
    SpectrumTable table;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = detail::trim(raw);
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> vals;
        std::istringstream row(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(row, cell, ',')) {
            cell = detail::trim(cell);
            size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                numeric = false;
            }
            if (used != cell.size()) numeric = false;
            vals.push_back(v);
        }
        if (!numeric) {
            if (table.rows.empty() && line_no <= 2) continue;  // header
            throw ConfigError(path, line_no, "photolysis.spectrum",
                              "non-numeric cell in '" + line + "'");
        }
        if (vals.size() != 4)
            throw ConfigError(path, line_no, "photolysis.spectrum",
                              "expected 4 columns, got " +
                                  std::to_string(vals.size()));
        table.rows.push_back({vals[0], vals[1], vals[2], vals[3]});
    }
    return table;
}

// Reads and parses a config file, loading any referenced spectrum CSV
// relative to the config file's directory.
inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "", "cannot open config file");
    std::stringstream buf;
    buf << in.rdbuf();
    ParsedConfig parsed = parse_config(buf.str(), path);

    if (parsed.spectrum_path) {
        std::string sp = *parsed.spectrum_path;
        if (!sp.empty() && sp.front() != '/') {
            size_t slash = path.find_last_of('/');
            if (slash != std::string::npos)
                sp = path.substr(0, slash + 1) + sp;
        }
        SpectrumTable t = load_spectrum_csv(sp);
        if (parsed.zenith) t.zenith_angle_theta = *parsed.zenith;
        parsed.config.photolysis.spectrum = t;
    } else if (parsed.zenith) {
        throw ConfigError(path, parsed.zenith_line, "photolysis.zenith",
                          "zenith is metadata for a spectrum table; set "
                          "'spectrum' too");
    }
    return parsed.config;
}

}  // namespace dbmc
