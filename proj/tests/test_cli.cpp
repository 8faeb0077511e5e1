#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "jsr/cli_config.hpp"
#include "jsr/errors.hpp"

namespace fs = std::filesystem;

namespace {

// A fresh scratch directory per test case, removed on destruction.
struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("jsr_cli_test_" + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("defaults are applied and flags parsed") {
    const auto config = jsr::parse_config({"sweep", "--m", "20", "--K", "4"});
    CHECK(config.command == "sweep");
    CHECK(config.n == 100);
    CHECK(config.m_values == std::vector<int>{20});
    CHECK(config.k_values == std::vector<int>{4});
    CHECK(config.n_samples == std::vector<int>{20});
    CHECK_FALSE(config.snr_db.has_value());
    CHECK(config.trials == 200);
    CHECK(config.master_seed == 0);
    CHECK(config.algorithms == std::vector<std::string>{"ss_music"});
    CHECK_FALSE(config.epsilon_rel.has_value());
    CHECK(config.t_max == 100);
    CHECK(config.out_dir == "results");
    CHECK_FALSE(config.emit_svg);
    CHECK(config.threads == 0);
    CHECK_FALSE(config.record_walltime);
}

TEST_CASE("lists parse from commas and repeated flags") {
    const auto config = jsr::parse_config({"sweep", "--m", "31,33,35", "--K", "30", "--algo",
                                           "ss_music,somp", "--algo", "imusic", "--snr-db",
                                           "25", "--seed", "11", "--trials", "50"});
    CHECK(config.m_values == std::vector<int>{31, 33, 35});
    CHECK(config.algorithms == std::vector<std::string>{"ss_music", "somp", "imusic"});
    CHECK(config.snr_db == 25.0);
    CHECK(config.master_seed == 11);
    CHECK(config.trials == 50);
}

TEST_CASE("invalid configurations are rejected") {
    using jsr::ConfigError;
    CHECK_THROWS_AS(jsr::parse_config({}), ConfigError);
    CHECK_THROWS_AS(jsr::parse_config({"dance", "--m", "20", "--K", "4"}), ConfigError);
    CHECK_THROWS_AS(jsr::parse_config({"sweep", "--K", "4"}), ConfigError);
    CHECK_THROWS_AS(jsr::parse_config({"sweep", "--m", "20"}), ConfigError);
    CHECK_THROWS_AS(jsr::parse_config({"sweep", "--m", "20", "--K", "4", "--bogus"}),
                    ConfigError);
    CHECK_THROWS_AS(jsr::parse_config({"sweep", "--m", "20", "--K", "4", "--algo", "nope"}),
                    ConfigError);
    CHECK_THROWS_AS(jsr::parse_config({"sweep", "--m", "4", "--K", "4"}), ConfigError);
    CHECK_THROWS_AS(jsr::parse_config({"sweep", "--m", "20", "--K", "0"}), ConfigError);
    CHECK_THROWS_AS(jsr::parse_config({"sweep", "--m", "20", "--K", "4", "--trials", "0"}),
                    ConfigError);
    CHECK_THROWS_AS(jsr::parse_config({"sweep", "--m", "20", "--K", "4", "--epsilon", "-1"}),
                    ConfigError);
    // Only one of m/K/N may vary per sweep.
    CHECK_THROWS_AS(jsr::parse_config({"sweep", "--m", "20,30", "--K", "4,5"}), ConfigError);
    // solve and hist demand scalar geometry.
    CHECK_THROWS_AS(jsr::parse_config({"solve", "--m", "20,30", "--K", "4"}), ConfigError);
    CHECK_THROWS_AS(jsr::parse_config({"hist", "--m", "20", "--K", "4", "--N", "5,6"}),
                    ConfigError);
    // phase runs a single algorithm on its own grid flags.
    CHECK_THROWS_AS(jsr::parse_config({"phase", "--algo", "ss_music,somp"}), ConfigError);
    CHECK_THROWS_AS(jsr::parse_config({"phase", "--m-min", "10", "--m-max", "5"}),
                    ConfigError);
}

TEST_CASE("help raises HelpRequested with text") {
    try {
        jsr::parse_config({"--help"});
        FAIL("expected HelpRequested");
    } catch (const jsr::HelpRequested& help) {
        CHECK(help.text.find("--snr-db") != std::string::npos);
        CHECK(help.text.find("solve") != std::string::npos);
    }
}

TEST_CASE("config files feed defaults and flags win") {
    TempDir dir("config");
    const fs::path file = dir.path / "run.cfg";
    {
        std::ofstream out(file);
        out << "n = 50\n"
            << "trials = 5\n"
            << "t-max = 40\n";
    }
    const auto config = jsr::parse_config(
        {"sweep", "--config", file.string(), "--m", "12", "--K", "4"});
    CHECK(config.n == 50);
    CHECK(config.trials == 5);
    CHECK(config.t_max == 40);

    const auto overridden = jsr::parse_config(
        {"sweep", "--config", file.string(), "--m", "12", "--K", "4", "--n", "60"});
    CHECK(overridden.n == 60);

    const fs::path bad = dir.path / "bad.cfg";
    {
        std::ofstream out(bad);
        out << "wibble = 3\n";
    }
    CHECK_THROWS_AS(
        jsr::parse_config({"sweep", "--config", bad.string(), "--m", "12", "--K", "4"}),
        jsr::ConfigError);
}

TEST_CASE("solve writes outputs and reports exit code 0") {
    TempDir dir("solve");
    const int code = jsr::cli_main({"solve", "--n", "30", "--m", "20", "--K", "4", "--N", "8",
                                    "--seed", "3", "--out", (dir.path / "out").string()});
    CHECK(code == 0);
    CHECK(fs::exists(dir.path / "out" / "solve.csv"));
    CHECK(fs::exists(dir.path / "out" / "solve.json"));

    const std::string csv = slurp(dir.path / "out" / "solve.csv");
    CHECK(csv.find("# command = solve") != std::string::npos);
    CHECK(csv.find("algorithm,n,m,K,N,snr_db,trial,seed,success,iterations,fitness_final,"
                   "wall_time_us,problem_hash") != std::string::npos);
    CHECK(csv.find("ss_music,30,20,4,8,") != std::string::npos);
}

TEST_CASE("sweep emits svg when asked and reruns byte-identically") {
    TempDir dir("sweep");
    const std::vector<std::string> args = {
        "sweep", "--n", "30", "--m", "16,20", "--K", "4", "--N", "8", "--trials", "4",
        "--algo", "ss_music,somp", "--emit-svg", "--out", (dir.path / "out").string()};
    CHECK(jsr::cli_main(args) == 0);
    CHECK(fs::exists(dir.path / "out" / "sweep.svg"));
    const std::string first = slurp(dir.path / "out" / "sweep.csv");

    CHECK(jsr::cli_main(args) == 0);
    CHECK(slurp(dir.path / "out" / "sweep.csv") == first);
    CHECK(first.find("ss_music,30,16,4,8,") != std::string::npos);
    CHECK(first.find("somp,30,20,4,8,") != std::string::npos);
}

TEST_CASE("hist writes one bar chart per algorithm") {
    TempDir dir("hist");
    CHECK(jsr::cli_main({"hist", "--n", "30", "--m", "20", "--K", "4", "--N", "8", "--trials",
                         "4", "--algo", "ss_music,somp", "--emit-svg", "--out",
                         (dir.path / "out").string()}) == 0);
    CHECK(fs::exists(dir.path / "out" / "hist_ss_music.svg"));
    CHECK(fs::exists(dir.path / "out" / "hist_somp.svg"));
}

TEST_CASE("phase runs its grid and masks infeasible cells") {
    TempDir dir("phase");
    CHECK(jsr::cli_main({"phase", "--n", "20", "--N", "6", "--trials", "2", "--algo",
                         "ss_music", "--m-min", "6", "--m-max", "10", "--m-step", "4",
                         "--k-min", "4", "--k-max", "8", "--k-step", "4", "--emit-svg",
                         "--out", (dir.path / "out").string()}) == 0);
    CHECK(fs::exists(dir.path / "out" / "phase.csv"));
    CHECK(fs::exists(dir.path / "out" / "phase.json"));
    const std::string svg = slurp(dir.path / "out" / "phase.svg");
    CHECK(svg.find("fill=\"#d9d9d9\"") != std::string::npos);  // the (6,8) cell
}

TEST_CASE("exit codes distinguish config from runtime failures") {
    CHECK(jsr::cli_main({"sweep", "--m", "20"}) == 2);
    CHECK(jsr::cli_main({"sweep", "--m", "20", "--K", "4", "--nonsense"}) == 2);
    CHECK(jsr::cli_main({"--help"}) == 0);

    TempDir dir("exit");
    const fs::path blocker = dir.path / "file";
    std::ofstream(blocker) << "x";
    // The output directory path runs through a regular file: a runtime error.
    CHECK(jsr::cli_main({"sweep", "--n", "30", "--m", "20", "--K", "4", "--N", "8",
                         "--trials", "2", "--out", (blocker / "sub").string()}) == 3);
}
