// Command-line front end: analytic curves, Monte Carlo runs, detection
// metrics, and the three-scenario comparison table. Every command writes
// CSV artifacts plus a JSON manifest with checksums, so a run can be
// audited and reproduced from its output directory alone.
//
// Exit codes: 0 success, 2 config invalid, 3 bad arguments or domain
// error, 4 particle-step budget exceeded, 5 I/O failure, 1 anything else.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dbmc/analytic.hpp"
#include "dbmc/config_parse.hpp"
#include "dbmc/csv.hpp"
#include "dbmc/detection.hpp"
#include "dbmc/manifest.hpp"
#include "dbmc/particle_sim.hpp"
#include "dbmc/presets.hpp"
#include "dbmc/scenario.hpp"

namespace fs = std::filesystem;
using namespace dbmc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigInvalid = 2;
constexpr int kExitBadArguments = 3;
constexpr int kExitBudgetExceeded = 4;
constexpr int kExitIoFailure = 5;

constexpr const char* kBudgetEnv = "DBMC_MAX_PARTICLE_STEPS";
constexpr uint64_t kDefaultBudget = 100000000000ull;  // molecule-steps

struct CliError {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) {
    throw CliError{code, message};
}

// The original command line, echoed into manifests.
std::string g_command_line;

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 =
        std::chrono::steady_clock::now();
    double lap() {
        auto t1 = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(t1 - t0).count();
        t0 = t1;
        return s;
    }
};

uint64_t budget_from_env() {
    const char* s = std::getenv(kBudgetEnv);
    if (!s || !*s) return kDefaultBudget;
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0' || !(v >= 0))
        fail(kExitBadArguments, std::string(kBudgetEnv) +
                                    " must be a non-negative number, got '" +
                                    s + "'");
    return uint64_t(v);  // 0 disables the ceiling
}

Scenario scenario_from_name(const std::string& name) {
    if (name == "none") return Scenario::none;
    if (name == "enzyme") return Scenario::enzyme;
    if (name == "photolysis") return Scenario::photolysis;
    fail(kExitBadArguments, "unknown scenario '" + name + "'");
}

// A config source is either a preset name or a path to a config file.
ScenarioConfig config_from_source(const std::string& source) {
    if (auto preset = make_preset(source)) return *preset;
    if (source.find('.') == std::string::npos &&
        source.find('/') == std::string::npos) {
        std::string names;
        for (const std::string& n : preset_names()) {
            if (!names.empty()) names += ", ";
            names += n;
        }
        fail(kExitBadArguments,
             "unknown preset '" + source + "'; available: " + names);
    }
    return load_config(source);  // ConfigError -> config-invalid
}

// Shared --config/--preset/--scenario/--seed handling.
struct SourceOpts {
    std::string config_path;
    std::string preset_name;
    std::string scenario_name;
    uint64_t seed = 0;
    bool seed_set = false;

    void attach(CLI::App* cmd, bool with_scenario = true) {
        auto* cfg = cmd->add_option("--config", config_path,
                                    "Path to a config file");
        auto* pre = cmd->add_option("--preset", preset_name,
                                    "Named preset (see --help-presets)");
        cfg->excludes(pre);
        if (with_scenario)
            cmd->add_option("--scenario", scenario_name,
                            "Override the config's scenario")
                ->check(CLI::IsMember({"none", "enzyme", "photolysis"}));
        cmd->add_option("--seed", seed, "Override the master seed")
            ->each([this](const std::string&) { seed_set = true; });
    }

    ScenarioConfig resolve() const {
        if (config_path.empty() && preset_name.empty())
            fail(kExitBadArguments, "either --config or --preset is required");
        ScenarioConfig c = config_from_source(
            !preset_name.empty() ? preset_name : config_path);
        if (!scenario_name.empty())
            c.simulation.scenario = scenario_from_name(scenario_name);
        if (seed_set) c.simulation.master_seed = seed;
        return c;
    }
};

// Print every violation, not just the first; exit config-invalid.
void ensure_valid(const ScenarioConfig& c) {
    auto v = validate(c);
    if (v.empty()) return;
    std::fprintf(stderr, "config invalid:\n");
    for (const Violation& x : v)
        std::fprintf(stderr, "  %s: %s\n", x.field.c_str(),
                     x.message.c_str());
    throw CliError{kExitConfigInvalid, ""};
}

std::string out_path(const std::string& out_dir, const std::string& name) {
    fs::path p = fs::path(out_dir) / name;
    return p.string();
}

void ensure_out_dir(const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        fail(kExitIoFailure,
             "cannot create output directory '" + out_dir + "': " +
                 ec.message());
}

// "start:stop:step" -> inclusive grid. An empty grid is a usage error.
std::vector<double> parse_grid(const std::string& spec) {
    double a = 0, b = 0, s = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &a, &b, &s) != 3)
        fail(kExitBadArguments,
             "--grid expects start:stop:step, got '" + spec + "'");
    if (!(s > 0))
        fail(kExitBadArguments, "--grid step must be > 0");
    if (a < 0)
        fail(kExitBadArguments, "--grid start must be >= 0");
    if (b < a) fail(kExitBadArguments, "time grid is empty (start > stop)");
    size_t n = size_t((b - a) / s + 1e-9) + 1;
    if (n > 10000000) fail(kExitBadArguments, "time grid too large");
    std::vector<double> grid(n);
    for (size_t i = 0; i < n; ++i) grid[i] = a + double(i) * s;
    return grid;
}

// "start:stop" -> integer threshold bounds.
std::pair<uint64_t, uint64_t> parse_zeta(const std::string& spec) {
    unsigned long long a = 0, b = 0;
    if (std::sscanf(spec.c_str(), "%llu:%llu", &a, &b) != 2)
        fail(kExitBadArguments,
             "--zeta expects start:stop, got '" + spec + "'");
    if (b < a) fail(kExitBadArguments, "--zeta range is empty (start > stop)");
    return {a, b};
}

std::vector<DetectionMethod> methods_from_name(const std::string& name) {
    if (name == "binomial") return {DetectionMethod::binomial};
    if (name == "poisson") return {DetectionMethod::poisson};
    if (name == "gaussian") return {DetectionMethod::gaussian};
    if (name == "all")
        return {DetectionMethod::binomial, DetectionMethod::poisson,
                DetectionMethod::gaussian};
    fail(kExitBadArguments, "unknown method '" + name + "'");
}

// The sample grid the simulator emits: t = 0, s, 2s, ..., duration.
std::vector<double> simulation_grid(const ScenarioConfig& c) {
    size_t m = size_t(c.simulation.duration / c.simulation.sample_interval +
                      1e-9);
    std::vector<double> grid(m + 1);
    for (size_t k = 0; k <= m; ++k)
        grid[k] = double(k) * c.simulation.sample_interval;
    return grid;
}

size_t argmax(const std::vector<double>& v) {
    size_t best = 0;
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

// ---------------------------------------------------------------- analytic

struct AnalyticOpts {
    SourceOpts source;
    std::string out_dir = ".";
    std::string grid_spec;
};

int cmd_analytic(const AnalyticOpts& o) {
    ScenarioConfig cfg = o.source.resolve();
    ensure_valid(cfg);
    ensure_out_dir(o.out_dir);

    std::vector<double> grid = o.grid_spec.empty()
                                   ? simulation_grid(cfg)
                                   : parse_grid(o.grid_spec);

    Stopwatch watch;
    ImpulseCurve curve;
    try {
        curve = impulse_curve(cfg.simulation.scenario, cfg, grid);
    } catch (const std::domain_error& e) {
        fail(kExitBadArguments, e.what());
    }
    double compute_s = watch.lap();

    std::string scen = to_string(cfg.simulation.scenario);
    std::string csv = out_path(o.out_dir, "analytic_" + scen + ".csv");
    write_curve_csv(csv, curve);

    RunManifest m;
    m.command = g_command_line;
    m.master_seed = cfg.simulation.master_seed;
    m.config_snapshot = config_to_json(cfg);
    m.resolved = resolved_parameters(cfg);
    m.timings.emplace_back("compute", compute_s);
    m.timings.emplace_back("write", watch.lap());
    m.output_paths = {csv};
    write_manifest(out_path(o.out_dir, "analytic_" + scen + "_manifest.json"),
                   m);

    size_t pk = argmax(curve.expected_counts);
    std::printf("analytic %s: peak %.6g at t = %.6g s (%zu points)\n",
                scen.c_str(), curve.expected_counts[pk], curve.times[pk],
                curve.times.size());
    std::printf("wrote %s\n", csv.c_str());
    return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
    SourceOpts source;
    std::string out_dir = ".";
    unsigned workers = 1;
};

int cmd_simulate(const SimulateOpts& o) {
    ScenarioConfig cfg = o.source.resolve();
    ensure_valid(cfg);
    ensure_out_dir(o.out_dir);

    Stopwatch watch;
    auto runs = run_impulse_many(cfg, o.workers, budget_from_env());
    double sim_s = watch.lap();
    AggregatedSeries agg = aggregate(runs);

    std::string scen = to_string(cfg.simulation.scenario);
    std::string stem = scen + "_" + std::to_string(cfg.simulation.master_seed);

    RunManifest m;
    m.command = g_command_line;
    m.master_seed = cfg.simulation.master_seed;
    m.config_snapshot = config_to_json(cfg);
    m.resolved = resolved_parameters(cfg);

    for (const ObservationSeries& run : runs) {
        std::string p = out_path(
            o.out_dir,
            stem + "_" + std::to_string(run.repetition_index) + ".csv");
        write_series_csv(p, run);
        m.output_paths.push_back(p);
    }
    std::string agg_csv = out_path(o.out_dir, stem + "_aggregated.csv");
    write_aggregated_csv(agg_csv, agg);
    m.output_paths.push_back(agg_csv);

    m.timings.emplace_back("simulate", sim_s);
    m.timings.emplace_back("write", watch.lap());
    write_manifest(out_path(o.out_dir, stem + "_manifest.json"), m);

    size_t pk = argmax(agg.mean);
    std::printf(
        "simulate %s: %u repetitions, peak mean %.6g at t = %.6g s\n",
        scen.c_str(), agg.repetitions, agg.mean[pk], agg.sample_times[pk]);
    std::printf("wrote %s (+%zu per-repetition files)\n", agg_csv.c_str(),
                runs.size());
    return kExitOk;
}

// ----------------------------------------------------------------- metrics

struct MetricsOpts {
    std::string input;
    std::string out_dir = ".";
    std::string scenario_label = "none";
    std::string zeta_spec = "0:80";
    std::string method_name = "all";
    double ts = 0.1;
    double p1 = 0.5;
    uint64_t molecules = 0;
};

int cmd_metrics(const MetricsOpts& o) {
    auto [z0, z1] = parse_zeta(o.zeta_spec);
    auto methods = methods_from_name(o.method_name);
    if (o.molecules == 0)
        fail(kExitBadArguments,
             "--molecules is required (the CSV carries counts, not the "
             "transmitted total)");
    ensure_out_dir(o.out_dir);

    SeriesTable table = read_series_table(o.input);
    if (table.times.empty()) fail(kExitBadArguments, "input has no rows");
    double t_end = table.times.back();
    if (o.ts < table.times.front() || o.ts > t_end)
        fail(kExitBadArguments,
             "--ts " + std::to_string(o.ts) + " is outside the series range [" +
                 std::to_string(table.times.front()) + ", " +
                 std::to_string(t_end) + "]");

    Stopwatch watch;
    ItrValue itr;
    if (table.is_curve) {
        ImpulseCurve curve;
        curve.times = table.times;
        curve.expected_counts = table.values;
        curve.scenario = scenario_from_name(o.scenario_label);
        itr = itr_from_curve(curve, o.ts, t_end);
    } else {
        itr = itr_from_series(table.times, table.values, o.ts, t_end);
    }

    size_t pk = argmax(table.values);
    double peak = table.values[pk];
    double p = peak / double(o.molecules);
    bool clamped = p > 1.0;
    if (clamped) {
        p = 1.0;
        std::fprintf(stderr,
                     "warning: peak %.6g exceeds --molecules %llu; "
                     "single-molecule probability clamped to 1\n",
                     peak, (unsigned long long)o.molecules);
    }

    std::vector<DetectionResult> rows;
    for (DetectionMethod method : methods) {
        auto sweep = threshold_sweep({o.molecules, p}, z0, z1, method, o.p1,
                                     table.times[pk]);
        rows.insert(rows.end(), sweep.begin(), sweep.end());
    }
    double compute_s = watch.lap();

    std::string itr_csv = out_path(o.out_dir, "metrics_itr.csv");
    std::string pe_csv = out_path(o.out_dir, "metrics_pe.csv");
    write_itr_csv(itr_csv, itr, o.scenario_label);
    write_pe_csv(pe_csv, rows, o.scenario_label);

    RunManifest m;
    m.command = g_command_line;
    m.config_snapshot = {{"input", o.input},
                         {"t_s", o.ts},
                         {"zeta", o.zeta_spec},
                         {"method", o.method_name},
                         {"molecules", o.molecules},
                         {"p1", o.p1},
                         {"scenario", o.scenario_label}};
    m.resolved = {{"peak_value", peak},
                  {"peak_time_s", table.times[pk]},
                  {"single_molecule_p", p},
                  {"p_clamped", clamped},
                  {"t_end_s", t_end}};
    m.timings.emplace_back("compute", compute_s);
    m.timings.emplace_back("write", watch.lap());
    m.output_paths = {itr_csv, pe_csv};
    write_manifest(out_path(o.out_dir, "metrics_manifest.json"), m);

    std::printf("itr %.6g (t_s = %.6g s, t_end = %.6g s)\n", itr.value,
                itr.t_s, itr.t_end);
    for (DetectionMethod method : methods) {
        std::vector<DetectionResult> just;
        for (const DetectionResult& r : rows)
            if (r.method == method) just.push_back(r);
        size_t best = argmin_pe(just);
        std::printf("%s: min Pe %.6g at zeta %.0f\n", to_string(method),
                    just[best].p_error, just[best].threshold_zeta);
    }
    std::printf("wrote %s, %s\n", itr_csv.c_str(), pe_csv.c_str());
    return kExitOk;
}

// ----------------------------------------------------------------- compare

struct CompareOpts {
    std::string none_src, enzyme_src, photolysis_src;
    std::string out_dir = ".";
    std::string zeta_spec = "0:80";
    std::string method_name = "poisson";
    double ts = -1.0;  // default: the none config's symbol period
    unsigned workers = 1;
    uint64_t seed = 0;
    bool seed_set = false;
};

int cmd_compare(const CompareOpts& o) {
    auto [z0, z1] = parse_zeta(o.zeta_spec);
    auto methods = methods_from_name(o.method_name);
    if (methods.size() != 1)
        fail(kExitBadArguments, "--method must name one method for compare");
    DetectionMethod method = methods.front();

    const char* roles[3] = {"none", "enzyme", "photolysis"};
    const std::string* sources[3] = {&o.none_src, &o.enzyme_src,
                                     &o.photolysis_src};
    Scenario expect[3] = {Scenario::none, Scenario::enzyme,
                          Scenario::photolysis};

    ScenarioConfig cfgs[3];
    for (int i = 0; i < 3; ++i) {
        cfgs[i] = config_from_source(*sources[i]);
        if (o.seed_set) cfgs[i].simulation.master_seed = o.seed;
        if (cfgs[i].simulation.scenario != expect[i])
            fail(kExitBadArguments,
                 std::string("--") + roles[i] + " config has scenario '" +
                     to_string(cfgs[i].simulation.scenario) + "'");
        ensure_valid(cfgs[i]);
    }
    for (int i = 1; i < 3; ++i) {
        const Geometry& a = cfgs[0].geometry;
        const Geometry& b = cfgs[i].geometry;
        if (a.distance_d != b.distance_d ||
            a.receiver_radius_r != b.receiver_radius_r ||
            receiver_volume(a) != receiver_volume(b))
            fail(kExitBadArguments,
                 std::string("geometry mismatch between --none and --") +
                     roles[i]);
        if (cfgs[0].transmission.molecules_N !=
            cfgs[i].transmission.molecules_N)
            fail(kExitBadArguments,
                 std::string("molecule count mismatch between --none and --") +
                     roles[i]);
    }
    ensure_out_dir(o.out_dir);

    double ts = o.ts >= 0 ? o.ts : cfgs[0].transmission.symbol_period_ts;
    uint64_t budget = budget_from_env();

    RunManifest m;
    m.command = g_command_line;
    m.master_seed = cfgs[0].simulation.master_seed;
    m.config_snapshot = nlohmann::json::object();
    m.resolved = nlohmann::json::object();

    struct Row {
        double peak_mean, peak_time, ratio, itr, min_pe, argmin_zeta;
    };
    Row rows[3];
    std::string agg_paths[3];
    for (int i = 0; i < 3; ++i) {
        Stopwatch watch;
        auto runs = run_impulse_many(cfgs[i], o.workers, budget);
        AggregatedSeries agg = aggregate(runs);
        m.timings.emplace_back(std::string("simulate_") + roles[i],
                               watch.lap());

        size_t pk = argmax(agg.mean);
        double t_end = agg.sample_times.back();
        if (ts > t_end)
            fail(kExitBadArguments,
                 "--ts " + std::to_string(ts) +
                     " is beyond the sampled duration " +
                     std::to_string(t_end));
        ItrValue itr = itr_from_series(agg.sample_times, agg.mean, ts, t_end);

        double p = agg.mean[pk] / double(cfgs[i].transmission.molecules_N);
        if (p > 1.0) p = 1.0;
        auto sweep = threshold_sweep({cfgs[i].transmission.molecules_N, p},
                                     z0, z1, method, 0.5,
                                     agg.sample_times[pk]);
        size_t best = argmin_pe(sweep);

        rows[i] = {agg.mean[pk],          agg.sample_times[pk], 0.0,
                   itr.value,             sweep[best].p_error,
                   sweep[best].threshold_zeta};

        agg_paths[i] = out_path(
            o.out_dir,
            std::string(roles[i]) + "_" +
                std::to_string(cfgs[i].simulation.master_seed) +
                "_aggregated.csv");
        write_aggregated_csv(agg_paths[i], agg);
        m.output_paths.push_back(agg_paths[i]);
        m.config_snapshot[roles[i]] = config_to_json(cfgs[i]);
        m.resolved[roles[i]] = resolved_parameters(cfgs[i]);
    }
    for (int i = 0; i < 3; ++i) rows[i].ratio = rows[i].peak_mean /
                                                rows[0].peak_mean;

    std::string summary = out_path(o.out_dir, "compare_summary.csv");
    {
        auto out = detail::open_out(summary);
        out << "scenario,peak_mean,peak_time_s,amplitude_ratio,itr,min_pe,"
               "argmin_zeta\n";
        for (int i = 0; i < 3; ++i)
            out << roles[i] << ',' << format_g9(rows[i].peak_mean) << ','
                << format_g9(rows[i].peak_time) << ','
                << format_g9(rows[i].ratio) << ',' << format_g9(rows[i].itr)
                << ',' << format_g9(rows[i].min_pe) << ','
                << format_g9(rows[i].argmin_zeta) << '\n';
        detail::finish(out, summary);
    }
    m.output_paths.push_back(summary);
    m.resolved["t_s"] = ts;
    m.resolved["method"] = to_string(method);
    write_manifest(out_path(o.out_dir, "compare_manifest.json"), m);

    std::printf("%-11s %10s %12s %10s %8s %12s %12s\n", "scenario",
                "peak_mean", "peak_time_s", "amp_ratio", "itr", "min_pe",
                "argmin_zeta");
    for (int i = 0; i < 3; ++i)
        std::printf("%-11s %10.4g %12.4g %10.4g %8.4g %12.4g %12.0f\n",
                    roles[i], rows[i].peak_mean, rows[i].peak_time,
                    rows[i].ratio, rows[i].itr, rows[i].min_pe,
                    rows[i].argmin_zeta);
    std::printf("wrote %s\n", summary.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        if (i > 1) g_command_line += ' ';
        g_command_line += argv[i];
    }

    CLI::App app{"Diffusion-based molecular communication toolkit"};
    app.require_subcommand(1);

    AnalyticOpts an;
    auto* analytic = app.add_subcommand(
        "analytic", "Evaluate the expected-count curve on a time grid");
    an.source.attach(analytic);
    analytic->add_option("--out", an.out_dir, "Output directory");
    analytic->add_option("--grid", an.grid_spec,
                         "Time grid start:stop:step in seconds "
                         "(default: the config's sample grid)");

    SimulateOpts sim;
    auto* simulate = app.add_subcommand(
        "simulate", "Run the Monte Carlo impulse experiment");
    sim.source.attach(simulate);
    simulate->add_option("--out", sim.out_dir, "Output directory");
    simulate->add_option("--workers", sim.workers,
                         "Worker threads for repetitions")
        ->check(CLI::Range(1u, 256u));

    MetricsOpts met;
    auto* metrics = app.add_subcommand(
        "metrics", "Interference and bit-error metrics from an emitted CSV");
    metrics->add_option("input", met.input, "Curve or series CSV")
        ->required();
    metrics->add_option("--ts", met.ts, "Symbol period t_s in seconds");
    metrics->add_option("--zeta", met.zeta_spec, "Threshold range start:stop");
    metrics->add_option("--method", met.method_name, "Detection method")
        ->check(CLI::IsMember({"binomial", "poisson", "gaussian", "all"}));
    metrics->add_option("--molecules", met.molecules,
                        "Transmitted molecule count N");
    metrics->add_option("--p1", met.p1, "A-priori probability of bit 1");
    metrics->add_option("--scenario", met.scenario_label,
                        "Scenario label for the output rows")
        ->check(CLI::IsMember({"none", "enzyme", "photolysis"}));
    metrics->add_option("--out", met.out_dir, "Output directory");

    CompareOpts cmp;
    auto* compare = app.add_subcommand(
        "compare", "Simulate and compare the three scenarios side by side");
    compare->add_option("--none", cmp.none_src,
                        "Config path or preset for the no-reaction scenario")
        ->required();
    compare->add_option("--enzyme", cmp.enzyme_src,
                        "Config path or preset for the enzyme scenario")
        ->required();
    compare
        ->add_option("--photolysis", cmp.photolysis_src,
                     "Config path or preset for the photolysis scenario")
        ->required();
    compare->add_option("--ts", cmp.ts,
                        "Symbol period t_s in seconds (default: the none "
                        "config's symbol period)");
    compare->add_option("--zeta", cmp.zeta_spec,
                        "Threshold range start:stop");
    compare->add_option("--method", cmp.method_name, "Detection method")
        ->check(CLI::IsMember({"binomial", "poisson", "gaussian"}));
    compare->add_option("--workers", cmp.workers,
                        "Worker threads for repetitions")
        ->check(CLI::Range(1u, 256u));
    compare->add_option("--seed", cmp.seed, "Override all three master seeds")
        ->each([&cmp](const std::string&) { cmp.seed_set = true; });
    compare->add_option("--out", cmp.out_dir, "Output directory");

    try {
        app.parse(argc, argv);
        if (*analytic) return cmd_analytic(an);
        if (*simulate) return cmd_simulate(sim);
        if (*metrics) return cmd_metrics(met);
        if (*compare) return cmd_compare(cmp);
        return kExitBadArguments;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadArguments;
    } catch (const CliError& e) {
        if (!e.message.empty())
            std::fprintf(stderr, "error: %s\n", e.message.c_str());
        return e.code;
    } catch (const BudgetExceeded& e) {
        std::fprintf(stderr, "error: %s (%s)\n", e.what(), kBudgetEnv);
        return kExitBudgetExceeded;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config invalid: %s\n", e.what());
        return kExitConfigInvalid;
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitIoFailure;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadArguments;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
