#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dbmc/analytic.hpp"
#include "dbmc/scenario.hpp"

// End-to-end checks of the installed command-line tool: artifact content,
// determinism, and the exit-code contract. DBMC_CLI_PATH is injected by the
// build so the tests always drive the binary they were built with.

using namespace dbmc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace fs = std::filesystem;

namespace {

const std::string kCli = DBMC_CLI_PATH;

// Runs a shell command, returning its exit code.
int run(const std::string& cmd) {
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

// Fresh scratch directory per test case; stale contents are removed.
fs::path work_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / "dbmc_cli_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    REQUIRE(out.good());
    out << text;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Reads a CSV with a header line into per-column vectors; cells that are
// not numeric (scenario labels, method names) come back as NaN.
std::vector<std::vector<double>> read_csv(const fs::path& path,
                                          std::string* header = nullptr) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    REQUIRE(std::getline(in, line));
    if (header) *header = line;
    std::vector<std::vector<double>> cols;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        size_t i = 0;
        while (std::getline(row, cell, ',')) {
            if (cols.size() <= i) cols.emplace_back();
            double v = std::numeric_limits<double>::quiet_NaN();
            try {
                v = std::stod(cell);
            } catch (const std::exception&) {
            }
            cols[i].push_back(v);
            ++i;
        }
    }
    return cols;
}

// Minimal fast-running configuration shared by the CLI tests.
std::string tiny_config(const std::string& scenario = "none",
                        const std::string& extra = "") {
    return "[environment]\n"
           "temperature = 298 K\n"
           "viscosity = 1e-3\n"
           "half_extent = 8 um\n"
           "diffusion = 1e-10\n"
           "[geometry]\n"
           "distance = 5 um\n"
           "receiver_radius = 1 um\n"
           "[transmission]\n"
           "molecules = 500\n"
           "symbol_period = 0.1 s\n"
           "p1 = 0.5\n"
           "[simulation]\n"
           "scenario = " + scenario + "\n"
           "timestep = 50 us\n"
           "sample_interval = 2.5 ms\n"
           "duration = 0.05 s\n"
           "repetitions = 3\n"
           "seed = 7\n" + extra;
}

}  // namespace

TEST_CASE("analytic artifact matches the closed-form curve", "[cli]") {
    fs::path dir = work_dir("analytic_curve");
    int rc = run(kCli + " analytic --preset paper-table1-1" +
                 " --grid 0:0.2:0.0001 --out " + dir.string() +
                 " > /dev/null");
    REQUIRE(rc == 0);

    std::string header;
    auto cols = read_csv(dir / "analytic_none.csv", &header);
    CHECK(header == "time_s,expected_count");
    REQUIRE(cols.size() == 2);
    REQUIRE(cols[0].size() == 2001);

    // Peak lands on the optimum-sampling time d^2 / 6D.
    size_t pk = 0;
    for (size_t i = 1; i < cols[1].size(); ++i)
        if (cols[1][i] > cols[1][pk]) pk = i;
    CHECK_THAT(cols[0][pk], WithinAbs(0.0417, 2e-4));

    // Emitted values agree with the library evaluated at the same times.
    ScenarioConfig cfg;
    cfg.environment.medium_half_extent = 20e-6;
    cfg.environment.diffusion_coefficient = 1e-10;
    cfg.geometry.distance_d = 5e-6;
    cfg.geometry.receiver_radius_r = 5e-6;
    cfg.transmission.molecules_N = 10000;
    for (size_t i : {size_t(1), pk, cols[0].size() - 1})
        CHECK_THAT(cols[1][i],
                   WithinRel(expected_count_no_reaction(
                                 cols[0][i], cfg.geometry, cfg.environment,
                                 double(cfg.transmission.molecules_N)),
                             1e-6));
}

TEST_CASE("an empty time grid is a usage error", "[cli]") {
    fs::path dir = work_dir("empty_grid");
    int rc = run(kCli + " analytic --preset desk-none --grid 0.3:0.1:0.01" +
                 " --out " + dir.string() + " 2> " +
                 (dir / "err.txt").string());
    CHECK(rc == 3);
    CHECK(slurp(dir / "err.txt").find("time grid is empty") !=
          std::string::npos);
}

TEST_CASE("re-running a command writes byte-identical artifacts", "[cli]") {
    fs::path dir = work_dir("rerun");
    std::string base = kCli + " analytic --preset desk-photolysis --out ";
    REQUIRE(run(base + (dir / "a").string() + " > /dev/null") == 0);
    REQUIRE(run(base + (dir / "b").string() + " > /dev/null") == 0);
    CHECK(slurp(dir / "a" / "analytic_photolysis.csv") ==
          slurp(dir / "b" / "analytic_photolysis.csv"));
}

TEST_CASE("simulate with no molecules emits all-zero rows", "[cli]") {
    fs::path dir = work_dir("zero_molecules");
    std::string cfg = tiny_config();
    cfg.replace(cfg.find("molecules = 500"), 15, "molecules = 0  ");
    cfg.replace(cfg.find("repetitions = 3"), 15, "repetitions = 1");
    write_file(dir / "n0.cfg", cfg);
    REQUIRE(run(kCli + " simulate --config " + (dir / "n0.cfg").string() +
                " --out " + dir.string() + " > /dev/null") == 0);

    auto cols = read_csv(dir / "none_7_aggregated.csv");
    REQUIRE(cols.size() == 5);
    REQUIRE(cols[0].size() == 21);  // t = 0, 2.5 ms, ..., 50 ms
    for (size_t c = 1; c < cols.size(); ++c)
        for (double v : cols[c]) CHECK(v == 0.0);
}

TEST_CASE("worker count does not change the sampled output", "[cli]") {
    fs::path dir = work_dir("workers");
    write_file(dir / "t.cfg", tiny_config());
    std::string base = kCli + " simulate --config " +
                       (dir / "t.cfg").string() + " --workers ";
    REQUIRE(run(base + "1 --out " + (dir / "w1").string() + " > /dev/null") ==
            0);
    REQUIRE(run(base + "8 --out " + (dir / "w8").string() + " > /dev/null") ==
            0);
    for (const char* f : {"none_7_0.csv", "none_7_1.csv", "none_7_2.csv",
                          "none_7_aggregated.csv"})
        CHECK(slurp(dir / "w1" / f) == slurp(dir / "w8" / f));
}

TEST_CASE("budget ceiling trips with the env variable named", "[cli]") {
    fs::path dir = work_dir("budget");
    write_file(dir / "t.cfg", tiny_config());
    int rc = run("DBMC_MAX_PARTICLE_STEPS=1000 " + kCli +
                 " simulate --config " + (dir / "t.cfg").string() +
                 " --out " + dir.string() + " 2> " +
                 (dir / "err.txt").string());
    CHECK(rc == 4);
    std::string err = slurp(dir / "err.txt");
    CHECK(err.find("DBMC_MAX_PARTICLE_STEPS") != std::string::npos);
    CHECK(err.find("1500000") != std::string::npos);  // 500 * 1000 * 3
}

TEST_CASE("invalid configs exit with every violation listed", "[cli]") {
    fs::path dir = work_dir("invalid_cfg");
    write_file(dir / "bad.cfg",
               "[geometry]\ndistance = -5 um\nreceiver_radius = 1 um\n");
    int rc = run(kCli + " analytic --config " + (dir / "bad.cfg").string() +
                 " 2> " + (dir / "err.txt").string());
    CHECK(rc == 2);
    std::string err = slurp(dir / "err.txt");
    CHECK(err.find("distance must be > 0") != std::string::npos);
    CHECK(err.find("timestep must be > 0") != std::string::npos);
}

TEST_CASE("malformed config lines carry file and line number", "[cli]") {
    fs::path dir = work_dir("malformed_cfg");
    write_file(dir / "m.cfg", "[geometry]\ndistance five\n");
    int rc = run(kCli + " analytic --config " + (dir / "m.cfg").string() +
                 " 2> " + (dir / "err.txt").string());
    CHECK(rc == 2);
    std::string err = slurp(dir / "err.txt");
    CHECK(err.find("m.cfg:2") != std::string::npos);
}

TEST_CASE("metrics reports zero interference when arrivals stop early",
          "[cli]") {
    fs::path dir = work_dir("itr_zero");
    write_file(dir / "series.csv",
               "time_s,count\n0,0\n0.01,4\n0.02,2\n0.03,0\n0.04,0\n0.05,0\n");
    REQUIRE(run(kCli + " metrics " + (dir / "series.csv").string() +
                " --molecules 500 --ts 0.03 --zeta 0:3 --method poisson" +
                " --out " + dir.string() + " > /dev/null") == 0);
    auto itr = read_csv(dir / "metrics_itr.csv");
    REQUIRE(itr.size() >= 3);
    CHECK(itr[2][0] == 0.0);
}

TEST_CASE("a zero threshold always detects", "[cli]") {
    fs::path dir = work_dir("zeta_zero");
    write_file(dir / "series.csv", "time_s,count\n0,0\n0.01,4\n0.02,2\n");
    REQUIRE(run(kCli + " metrics " + (dir / "series.csv").string() +
                " --molecules 500 --ts 0.01 --zeta 0:5 --method all" +
                " --out " + dir.string() + " > /dev/null") == 0);
    std::string header;
    auto pe = read_csv(dir / "metrics_pe.csv", &header);
    CHECK(header == "zeta,method,p_detect,p_error,scenario");
    // Column 1 is the method name; read_csv cannot parse it, so reread raw.
    std::ifstream in(dir / "metrics_pe.csv");
    std::string line;
    std::getline(in, line);  // header
    int zero_rows = 0;
    while (std::getline(in, line)) {
        if (line.rfind("0,", 0) != 0) continue;
        ++zero_rows;
        std::stringstream row(line);
        std::string zeta, method, p_detect, p_error;
        std::getline(row, zeta, ',');
        std::getline(row, method, ',');
        std::getline(row, p_detect, ',');
        std::getline(row, p_error, ',');
        CHECK(std::stod(p_detect) == 1.0);
        CHECK(std::stod(p_error) == 0.0);
    }
    CHECK(zero_rows == 3);  // one per method
}

TEST_CASE("metrics rejects a cutoff outside the series", "[cli]") {
    fs::path dir = work_dir("ts_range");
    write_file(dir / "series.csv", "time_s,count\n0,0\n0.01,4\n0.02,2\n");
    int rc = run(kCli + " metrics " + (dir / "series.csv").string() +
                 " --molecules 500 --ts 0.2 --out " + dir.string() + " 2> " +
                 (dir / "err.txt").string());
    CHECK(rc == 3);
    CHECK(slurp(dir / "err.txt").find("outside the series range") !=
          std::string::npos);
}

TEST_CASE("metrics requires the transmitted count", "[cli]") {
    fs::path dir = work_dir("need_n");
    write_file(dir / "series.csv", "time_s,count\n0,0\n0.01,4\n");
    int rc = run(kCli + " metrics " + (dir / "series.csv").string() +
                 " --ts 0.01 --out " + dir.string() + " 2> /dev/null");
    CHECK(rc == 3);
}

TEST_CASE("compare agrees with simulate on the shared scenario", "[cli]") {
    fs::path dir = work_dir("compare_shared");
    write_file(dir / "none.cfg", tiny_config());
    write_file(dir / "enz.cfg",
               tiny_config("enzyme",
                           "enzyme_mode = microscopic\n"
                           "[enzyme]\n"
                           "count = 300\n"
                           "binding_rate = 3e-17\n"
                           "unbinding_rate = 10\n"
                           "degradation_rate = 0.5\n"
                           "diffusion = 0\n"
                           "deployment_radius = 2 um\n"));
    write_file(dir / "pho.cfg",
               tiny_config("photolysis",
                           "[photolysis]\n"
                           "rate = 100\n"
                           "shell = 6 um 1.0\n"
                           "shell = 11 um 0.75\n"
                           "shell = 16 um 0.5\n"
                           "shell = 21 um 0.25\n"));

    REQUIRE(run(kCli + " simulate --config " + (dir / "none.cfg").string() +
                " --out " + (dir / "solo").string() + " > /dev/null") == 0);
    REQUIRE(run(kCli + " compare --none " + (dir / "none.cfg").string() +
                " --enzyme " + (dir / "enz.cfg").string() + " --photolysis " +
                (dir / "pho.cfg").string() + " --ts 0.02 --out " +
                (dir / "cmp").string() + " > /dev/null") == 0);

    // Same seed, same scenario: the comparison must reproduce the solo run.
    CHECK(slurp(dir / "solo" / "none_7_aggregated.csv") ==
          slurp(dir / "cmp" / "none_7_aggregated.csv"));

    std::string header;
    auto cols = read_csv(dir / "cmp" / "compare_summary.csv", &header);
    CHECK(header ==
          "scenario,peak_mean,peak_time_s,amplitude_ratio,itr,min_pe,"
          "argmin_zeta");
    REQUIRE(cols.size() == 7);
    REQUIRE(cols[1].size() == 3);
    CHECK(cols[3][0] == 1.0);  // the baseline's amplitude ratio
}

TEST_CASE("compare rejects mismatched roles and geometry", "[cli]") {
    fs::path dir = work_dir("compare_mismatch");
    write_file(dir / "none.cfg", tiny_config());
    write_file(dir / "enz.cfg",
               tiny_config("enzyme",
                           "enzyme_mode = microscopic\n"
                           "[enzyme]\n"
                           "count = 300\n"
                           "binding_rate = 3e-17\n"
                           "unbinding_rate = 10\n"
                           "degradation_rate = 0.5\n"
                           "diffusion = 0\n"));
    write_file(dir / "pho.cfg",
               tiny_config("photolysis",
                           "[photolysis]\n"
                           "rate = 100\n"
                           "shell = 6 um 1.0\n"));

    int rc = run(kCli + " compare --none " + (dir / "enz.cfg").string() +
                 " --enzyme " + (dir / "enz.cfg").string() +
                 " --photolysis " + (dir / "pho.cfg").string() + " --out " +
                 (dir / "x").string() + " 2> " + (dir / "e1.txt").string());
    CHECK(rc == 3);
    CHECK(slurp(dir / "e1.txt").find("scenario 'enzyme'") !=
          std::string::npos);

    std::string far = tiny_config();
    far.replace(far.find("distance = 5 um"), 15, "distance = 6 um");
    write_file(dir / "far.cfg", far);
    rc = run(kCli + " compare --none " + (dir / "far.cfg").string() +
             " --enzyme " + (dir / "enz.cfg").string() + " --photolysis " +
             (dir / "pho.cfg").string() + " --out " + (dir / "x").string() +
             " 2> " + (dir / "e2.txt").string());
    CHECK(rc == 3);
    CHECK(slurp(dir / "e2.txt").find("geometry mismatch") !=
          std::string::npos);
}

TEST_CASE("manifest records command, seed, and artifact checksums", "[cli]") {
    fs::path dir = work_dir("manifest");
    REQUIRE(run(kCli + " analytic --preset desk-none --seed 55 --out " +
                dir.string() + " > /dev/null") == 0);
    std::string m = slurp(dir / "analytic_none_manifest.json");
    CHECK(m.find("\"master_seed\": 55") != std::string::npos);
    CHECK(m.find("analytic --preset desk-none --seed 55") !=
          std::string::npos);
    CHECK(m.find("analytic_none.csv") != std::string::npos);
    CHECK(m.find("fnv1a64") != std::string::npos);
}
