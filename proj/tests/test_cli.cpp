#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "garchboot/cli.hpp"

using namespace garchboot;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("simulate subcommand writes deterministic CSV", "[cli]") {
    const auto dir1 = fresh_dir("gb_cli_sim1");
    const auto dir2 = fresh_dir("gb_cli_sim2");
    REQUIRE(run_cli({"simulate", "--n", "5", "--seed", "9", "--out", dir1.string()}) == kExitOk);
    REQUIRE(run_cli({"simulate", "--n", "5", "--seed", "9", "--out", dir2.string()}) == kExitOk);

    const std::string csv1 = slurp(dir1 / "simulate.csv");
    REQUIRE(csv1.substr(0, 6) == "t,x,h\n");
    REQUIRE(std::count(csv1.begin(), csv1.end(), '\n') == 6);  // header + 5 rows
    REQUIRE(csv1 == slurp(dir2 / "simulate.csv"));
    REQUIRE(fs::exists(dir1 / "simulate.meta.txt"));

    const auto dir3 = fresh_dir("gb_cli_sim3");
    REQUIRE(run_cli({"simulate", "--n", "5", "--seed", "10", "--out", dir3.string()}) == kExitOk);
    REQUIRE(csv1 != slurp(dir3 / "simulate.csv"));
}

TEST_CASE("fit subcommand produces a report", "[cli]") {
    const auto dir = fresh_dir("gb_cli_fit");
    const SamplePath sample =
        simulate(GarchSpec(1.0, {0.5}), InnovationDistribution::gaussian(), 2000, 1000, 31415);
    const fs::path series = dir / "series.txt";
    {
        std::ofstream out(series);
        out << "# simulated ARCH(1) sample\n";
        for (double x : sample.values) out << format_double(x) << '\n';
    }
    REQUIRE(run_cli({"fit", series.string(), "--out", dir.string(), "--N", "100000"}) == kExitOk);
    const std::string csv = slurp(dir / "fit.csv");
    REQUIRE(csv.substr(0, 25) == "param,estimate,std_error\n");
    REQUIRE(csv.find("omega,") != std::string::npos);
    REQUIRE(csv.find("alpha1,") != std::string::npos);
}

TEST_CASE("fit rejects short samples with exit code 2", "[cli]") {
    const auto dir = fresh_dir("gb_cli_fit_short");
    const fs::path series = dir / "short.txt";
    {
        std::ofstream out(series);
        for (int i = 0; i < 10; ++i) out << "1.5\n";
    }
    REQUIRE(run_cli({"fit", series.string(), "--out", dir.string()}) == kExitUsage);
}

TEST_CASE("fit rejects non-numeric input with exit code 3", "[cli]") {
    const auto dir = fresh_dir("gb_cli_fit_bad");
    const fs::path series = dir / "bad.txt";
    {
        std::ofstream out(series);
        out << "1.0\n2.0\noops\n";
    }
    REQUIRE(run_cli({"fit", series.string(), "--out", dir.string()}) == kExitDataError);
    REQUIRE(run_cli({"fit", (dir / "missing.txt").string(), "--out", dir.string()}) ==
            kExitDataError);
}

TEST_CASE("usage errors exit with code 2", "[cli]") {
    REQUIRE(run_cli({}) == kExitUsage);                       // missing subcommand
    REQUIRE(run_cli({"frobnicate"}) == kExitUsage);           // unknown subcommand
    REQUIRE(run_cli({"simulate", "--bogus", "1"}) == kExitUsage);
    const auto dir = fresh_dir("gb_cli_badcfg");
    REQUIRE(run_cli({"simulate", "--n", "0", "--out", dir.string()}) == kExitUsage);
    REQUIRE(run_cli({"simulate", "--dist", "cauchy", "--out", dir.string()}) == kExitUsage);
}

TEST_CASE("help exits cleanly", "[cli]") {
    REQUIRE(run_cli({"--help"}) == kExitOk);
}

TEST_CASE("config file values are overridden by flags", "[cli]") {
    const auto dir = fresh_dir("gb_cli_cfg");
    const fs::path cfg_path = dir / "run.cfg";
    {
        std::ofstream out(cfg_path);
        out << "n=4\nseed=123\nout=" << dir.string() << "\n";
    }
    REQUIRE(run_cli({"--config", cfg_path.string(), "simulate", "--n", "7"}) == kExitOk);
    const std::string csv = slurp(dir / "simulate.csv");
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 8);  // header + 7 rows

    {
        std::ofstream out(cfg_path);
        out << "typo_key=1\n";
    }
    REQUIRE(run_cli({"--config", cfg_path.string(), "simulate"}) == kExitUsage);
    REQUIRE(run_cli({"--config", (dir / "nope.cfg").string(), "simulate"}) == kExitUsage);
}
