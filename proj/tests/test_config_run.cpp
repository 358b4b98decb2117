#include "rydssh/config.hpp"
#include "rydssh/csv.hpp"
#include "rydssh/run.hpp"

#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rydssh;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigDir = RYDSSH_CONFIG_DIR;
const fs::path kDataDir = RYDSSH_TEST_DATA_DIR;

const std::vector<std::string> kBundled{"fig3_dressed_scan", "fig4_bulk_59s", "fig5_edge_58s",
                                        "fig6_edge_splitting", "fig7_protection", "size_scaling"};

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("rydssh_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<double>> read_table(const fs::path& p, std::vector<std::string>* header = nullptr) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    if (header) {
        std::stringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) header->push_back(cell);
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::stringstream ls(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        rows.push_back(row);
    }
    return rows;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RYDSSH_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("every bundled config runs, quickly and deterministically") {
    for (const auto& name : kBundled) {
        CAPTURE(name);
        const auto config = load_config(kConfigDir / (name + ".json"));
        const auto a = scratch(name + "_a");
        const auto b = scratch(name + "_b");
        const auto start = std::chrono::steady_clock::now();
        const auto summary = run(config, {a, 0});
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        CHECK(seconds < 5.0);
        run(config, {b, 0});
        REQUIRE(!summary.files.empty());
        for (const auto& f : summary.files) {
            CHECK(slurp(f) == slurp(b / f.filename()));
        }
    }
}

TEST_CASE("fig4 trajectory is fractional") {
    const auto out = scratch("fig4");
    run(load_config(kConfigDir / "fig4_bulk_59s.json"), {out, 0});
    std::vector<std::string> header;
    const auto rows = read_table(out / "fig4_bulk_59s_trajectory.csv", &header);
    CHECK(header == std::vector<std::string>{"t_us", "p_58", "p_59", "p_60", "p_61", "p_62", "p_63", "survival"});
    REQUIRE(rows.size() == 2001);
    for (const auto& r : rows) {
        double sum = 0.0;
        for (std::size_t i = 1; i <= 6; ++i) sum += r[i];
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
    }
    CHECK(fs::exists(out / "fig4_bulk_59s_trajectory_long.csv"));
    CHECK(fs::exists(out / "fig4_bulk_59s_summary.json"));
}

TEST_CASE("fig6 sweep has its minimum at zero detuning") {
    const auto out = scratch("fig6");
    const auto summary = run(load_config(kConfigDir / "fig6_edge_splitting.json"), {out, 0});
    CHECK(summary.scalars.at("detuning_at_min_khz") == 0.0);
    CHECK(summary.scalars.at("min_splitting_khz") == doctest::Approx(6.145117278).epsilon(1e-8));
    CHECK(summary.scalars.contains("fwhm_khz"));
    std::vector<std::string> header;
    const auto rows = read_table(out / "fig6_edge_splitting_sweep.csv", &header);
    CHECK(header == std::vector<std::string>{"param_value", "splitting_khz", "max_far_edge_population"});
    CHECK(rows.size() == 201);
}

TEST_CASE("sfi pipeline recovers the evolved populations") {
    const auto out = scratch("sfi");
    const auto summary = run(load_config(kDataDir / "sfi_pipeline.json"), {out, 0});
    CHECK(summary.scalars.at("max_population_error") < 1e-4);
    CHECK(summary.scalars.at("background_coefficient") ==
          doctest::Approx(1.0 - std::exp(-0.1)).epsilon(1e-4));

    // Same run against a basis loaded from disk.
    const auto basis_dir = scratch("sfi_basis");
    const auto grid = uniform_grid(15.0, 1501);
    for (int n = 58; n <= 63; ++n) {
        csv::write_file_atomic(basis_dir / (std::to_string(n) + "s.csv"),
                               csv::trace(synthesize_trace(n, RampParams{}, 0.3, grid)));
    }
    auto config = load_config(kDataDir / "sfi_pipeline.json");
    config.sfi.basis_dir = basis_dir.string();
    CHECK(run(config, {out, 0}).scalars.at("max_population_error") < 1e-4);
}

TEST_CASE("noisy sfi runs depend only on the seed") {
    auto config = load_config(kDataDir / "sfi_pipeline.json");
    config.sfi.noise_fraction = 0.01;
    const auto a = scratch("noise_a");
    const auto b = scratch("noise_b");
    run(config, {a, 7});
    run(config, {b, 7});
    CHECK(slurp(a / "sfi_pipeline_unmix.csv") == slurp(b / "sfi_pipeline_unmix.csv"));
    run(config, {b, 8});
    CHECK(slurp(a / "sfi_pipeline_sfi_trace.csv") != slurp(b / "sfi_pipeline_sfi_trace.csv"));
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(parse_config(""), ConfigError);
    CHECK_THROWS_AS(parse_config("{}"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"experiment": "evolve", "lattise": {}})"), doctest::Contains("lattise"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"experiment": "evolve", "lattice": {"labels": [1, 2], "couplings_khz": [1], "extra": 1}})"),
                         doctest::Contains("lattice.extra"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"experiment": "evolve"})"),
                         doctest::Contains("lattice initial_site time"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"experiment": "dressed_scan", "sweep": {"omega_weak_khz": 1}})"),
                         doctest::Contains("sweep.ratios sweep.size"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"experiment": "teleport"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"experiment": "evolve", "lattice": {"labels": [1, 2], "couplings_khz": [1]},
                                    "initial_site": 3, "time": {"t_max_us": 1}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"experiment": "evolve", "lattice": {"labels": [1, 2], "couplings_khz": "x"}})"),
                    ConfigError);
}

TEST_CASE("output directory precedence") {
    auto config = parse_config(R"({"experiment": "splitting_vs_size",
                                   "sweep": {"omega_weak_khz": 1, "omega_strong_khz": 5, "sizes": [4, 6]}})");
    setenv(kOutputDirEnv, "/tmp/from_env", 1);
    CHECK(resolve_output_dir(config, {}) == fs::path("/tmp/from_env"));
    config.output.dir = "/tmp/from_config";
    CHECK(resolve_output_dir(config, {}) == fs::path("/tmp/from_config"));
    CHECK(resolve_output_dir(config, {fs::path("/tmp/from_flag"), 0}) == fs::path("/tmp/from_flag"));
    unsetenv(kOutputDirEnv);
}

TEST_CASE("CLI exit codes") {
    const auto out = scratch("cli");
    CHECK(run_cli("run " + (kConfigDir / "size_scaling.json").string() + " --out " + out.string()) == 0);
    CHECK(fs::exists(out / "size_scaling_sweep.csv"));

    const auto empty = out / "empty.json";
    std::ofstream(empty) << "";
    CHECK(run_cli("run " + empty.string()) == 1);
    CHECK(run_cli("run") == 1);
    CHECK(run_cli("run /nonexistent/config.json") == 1);

    const auto odd = out / "odd.json";
    std::ofstream(odd) << R"({"experiment": "sweep_edge_detuning",
        "lattice": {"labels": [1, 2, 3], "couplings_khz": [160, 800]},
        "sweep": {"bond_index": 0, "values": [0, 1]}})";
    CHECK(run_cli("run " + odd.string() + " --out " + out.string()) == 2);
}
