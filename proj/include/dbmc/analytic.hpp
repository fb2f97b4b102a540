#pragma once
// Closed-form channel models: diffusion coefficient from fluid properties,
// the expected received-count curves for the three scenarios, the optimal
// light-on time, and the photolysis rate integral.
//
// The reaction curves are lower bounds, not exact solutions: both assume
// the degrading reaction acts on every molecule at full strength for the
// whole flight, which can only overstate the loss.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dbmc/scenario.hpp"

namespace dbmc {

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K
inline constexpr double kPi = 3.14159265358979323846;

// Stokes-Einstein: D = k_B·T / (6π·η·R).
inline double diffusion_coefficient(double temperature_K, double viscosity,
                                    double molecule_radius) {
    if (!(temperature_K > 0))
        throw std::domain_error("temperature must be > 0");
    if (!(viscosity > 0))
        throw std::domain_error("viscosity must be > 0");
    if (!(molecule_radius > 0))
        throw std::domain_error("molecule radius must be > 0");
    return kBoltzmann * temperature_K / (6.0 * kPi * viscosity * molecule_radius);
}

// The diffusion coefficient an environment implies: direct value if given,
// otherwise Stokes-Einstein from the molecule radius.
inline double diffusion_of(const Environment& env) {
    if (env.diffusion_coefficient) {
        if (!(*env.diffusion_coefficient > 0))
            throw std::domain_error("diffusion coefficient must be > 0");
        return *env.diffusion_coefficient;
    }
    if (env.molecule_radius)
        return diffusion_coefficient(env.temperature_K, env.viscosity,
                                     *env.molecule_radius);
    throw std::domain_error(
        "either a diffusion coefficient or a molecule radius is required");
}

// Time at which the no-reaction expected count peaks: d²/(6D). Lighting at
// this moment cuts interference while sparing the main pulse.
inline double optimal_light_time(double distance_d, double D) {
    if (distance_d < 0)
        throw std::domain_error("distance must be >= 0");
    if (!(D > 0))
        throw std::domain_error("diffusion coefficient must be > 0");
    return distance_d * distance_d / (6.0 * D);
}

// First-order photolysis rate: trapezoidal quadrature of φ(λ)·σ(λ)·F(θ,λ)
// over the tabulated wavelengths. A single-row table is read as one
// 1 nm-wide bin.
inline double photolysis_rate(const SpectrumTable& table) {
    if (table.rows.empty())
        throw std::domain_error("spectrum table needs at least one row");
    auto integrand = [](const SpectrumRow& r) {
        return r.quantum_yield_phi * r.cross_section_sigma * r.actinic_flux_F;
    };
    if (table.rows.size() == 1) return integrand(table.rows[0]);
    double J = 0.0;
    for (size_t i = 1; i < table.rows.size(); ++i) {
        double width = table.rows[i].wavelength_nm -
                       table.rows[i - 1].wavelength_nm;
        J += 0.5 * (integrand(table.rows[i]) + integrand(table.rows[i - 1])) *
             width;
    }
    return J;
}

// The photolysis rate a config implies: direct value if given, otherwise
// integrated from its spectrum table.
inline double resolve_photolysis_rate(const PhotolysisConfig& p) {
    if (p.rate_J) return *p.rate_J;
    if (p.spectrum) return photolysis_rate(*p.spectrum);
    throw std::domain_error("photolysis needs a rate or a spectrum table");
}

// The light-on time a config implies: direct value if given, otherwise the
// optimal time for the channel geometry.
inline double resolve_light_on_time(const PhotolysisConfig& p,
                                    const Geometry& g, const Environment& env) {
    if (p.T_op) return *p.T_op;
    return optimal_light_time(g.distance_d, diffusion_of(env));
}

// Expected number of molecules inside the receiver at time t after an
// impulse release of N molecules, no reactions:
//     N·V / (8(πDt)^{3/2}) · exp(−d²/(4Dt))
// t = 0 maps to 0 (the continuous limit for d > 0).
inline double expected_count_no_reaction(double t, const Geometry& g,
                                         const Environment& env, double N) {
    if (t < 0) throw std::domain_error("time must be >= 0");
    if (t == 0) return 0.0;
    double D = diffusion_of(env);
    double V = receiver_volume(g);
    double spread = 8.0 * std::pow(kPi * D * t, 1.5);
    return N * V / spread * std::exp(-g.distance_d * g.distance_d / (4.0 * D * t));
}

// The lower-bound exponent as the model is stated omits the time factor
// (exp(−k₁E_tot), dimensionally a rate in an exponent); with_time restores
// it to the standard exp(−k₁E_tot·t) decay. Both are available so the two
// readings can be compared.
enum class EnzymeExponent { with_time, as_printed };

// Lower bound on the expected count under enzymatic degradation: the
// no-reaction value damped by the well-mixed free-enzyme decay factor.
inline double expected_count_enzyme(double t, const Geometry& g,
                                    const Environment& env, double N,
                                    double k1, double E_tot,
                                    EnzymeExponent mode = EnzymeExponent::with_time) {
    if (k1 < 0 || E_tot < 0)
        throw std::domain_error("rates and concentrations must be >= 0");
    double base = expected_count_no_reaction(t, g, env, N);
    double expo = mode == EnzymeExponent::with_time ? k1 * E_tot * t
                                                    : k1 * E_tot;
    return base * std::exp(-expo);
}

// Lower bound on the expected count under photolysis with light switched
// on at T_op: before T_op the channel is reaction-free; from T_op on, the
// spatial factor is frozen at its T_op value and decays at rate J. The
// as_written decay exp(−Jt) jumps by exp(−J·T_op) at the switch;
// shifted mode exp(−J(t−T_op)) is the continuous variant.
inline double expected_count_photolysis(double t, const Geometry& g,
                                        const Environment& env, double N,
                                        double J, double T_op,
                                        ContinuityMode mode) {
    if (J < 0) throw std::domain_error("photolysis rate must be >= 0");
    if (!(T_op > 0)) throw std::domain_error("light-on time must be > 0");
    if (t < T_op) return expected_count_no_reaction(t, g, env, N);
    double frozen = expected_count_no_reaction(T_op, g, env, N);
    double decay = mode == ContinuityMode::as_written ? J * t : J * (t - T_op);
    return frozen * std::exp(-decay);
}

// Expected-count curve on a time grid.
struct ImpulseCurve {
    std::vector<double> times;
    std::vector<double> expected_counts;
    Scenario scenario = Scenario::none;
};

// Pointwise application of the matching expected-count model.
inline ImpulseCurve impulse_curve(Scenario scenario, const ScenarioConfig& c,
                                  const std::vector<double>& time_grid) {
    for (size_t i = 0; i < time_grid.size(); ++i) {
        if (time_grid[i] < 0 || (i > 0 && !(time_grid[i] > time_grid[i - 1])))
            throw std::domain_error(
                "time grid must be non-negative and strictly increasing");
    }
    ImpulseCurve out;
    out.times = time_grid;
    out.scenario = scenario;
    out.expected_counts.reserve(time_grid.size());
    double N = double(c.transmission.molecules_N);
    switch (scenario) {
        case Scenario::none:
            for (double t : time_grid)
                out.expected_counts.push_back(
                    expected_count_no_reaction(t, c.geometry, c.environment, N));
            break;
        case Scenario::enzyme: {
            double E_tot = enzyme_concentration(c.enzyme, c.environment);
            for (double t : time_grid)
                out.expected_counts.push_back(expected_count_enzyme(
                    t, c.geometry, c.environment, N, c.enzyme.binding_rate_k1,
                    E_tot));
            break;
        }
        case Scenario::photolysis: {
            double J = resolve_photolysis_rate(c.photolysis);
            double T_op =
                resolve_light_on_time(c.photolysis, c.geometry, c.environment);
            for (double t : time_grid)
                out.expected_counts.push_back(expected_count_photolysis(
                    t, c.geometry, c.environment, N, J, T_op,
                    c.photolysis.continuity_mode));
            break;
        }
        default:
            throw std::domain_error("unknown scenario");
    }
    return out;
}

}  // namespace dbmc
