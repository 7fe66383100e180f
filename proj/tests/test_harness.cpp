#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "garchboot/harness.hpp"

using namespace garchboot;
using Catch::Approx;

namespace {

std::string write_temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("key=value config parsing", "[harness]") {
    const auto path = write_temp_file("garchboot_cfg_ok.txt",
                                      "# comment line\n"
                                      "n = 500\n"
                                      "alpha0=0.3,0.2   # trailing comment\n"
                                      "dist=t5\n"
                                      "\n");
    const KeyValueConfig kv = KeyValueConfig::from_file(path);
    REQUIRE(kv.get_u64("n", 0) == 500);
    REQUIRE(kv.get_double_list("alpha0", {}) == std::vector<double>{0.3, 0.2});
    REQUIRE(kv.get_string("dist", "") == "t5");
    REQUIRE(kv.get_u64("missing", 7) == 7);

    const auto bad = write_temp_file("garchboot_cfg_bad.txt", "just a line\n");
    REQUIRE_THROWS_AS(KeyValueConfig::from_file(bad), ConfigError);

    KeyValueConfig typed;
    typed.set("n", "abc");
    REQUIRE_THROWS_AS(typed.get_u64("n", 0), ConfigError);
    typed.set("x", "1.5qq");
    REQUIRE_THROWS_AS(typed.get_double("x", 0), ConfigError);
}

TEST_CASE("experiment config rejects unknown keys and bad values", "[harness]") {
    ExperimentConfig cfg;
    KeyValueConfig kv;
    kv.set("no_such_key", "1");
    REQUIRE_THROWS_AS(cfg.apply(kv), ConfigError);

    KeyValueConfig bad_level;
    bad_level.set("levels", "1.5");
    REQUIRE_THROWS_AS(cfg.apply(bad_level), ConfigError);

    KeyValueConfig bad_method;
    bad_method.set("methods", "wb,unknown");
    REQUIRE_THROWS_AS(cfg.apply(bad_method), ConfigError);

    KeyValueConfig ok;
    ok.set("omega0", "2.0");
    ok.set("alpha0", "0.4");
    ok.set("n", "200");
    cfg.apply(ok);
    REQUIRE(cfg.model.omega == 2.0);
    REQUIRE(cfg.model.alpha == std::vector<double>{0.4});
    REQUIRE(cfg.n == 200);
}

TEST_CASE("seed derivation separates streams", "[harness]") {
    REQUIRE(derive_seed(1, 0, "a") == derive_seed(1, 0, "a"));
    REQUIRE(derive_seed(1, 0, "a") != derive_seed(1, 1, "a"));
    REQUIRE(derive_seed(1, 0, "a") != derive_seed(2, 0, "a"));
    REQUIRE(derive_seed(1, 0, "a") != derive_seed(1, 0, "b"));
}

TEST_CASE("run_replications is schedule-independent", "[harness]") {
    const auto task = [](std::size_t rep, std::uint64_t seed) {
        Rng rng(seed);
        return static_cast<double>(rep) + rng.uniform();
    };
    const auto serial = run_replications<double>(64, 1, 99, "sched", task);
    const auto parallel = run_replications<double>(64, 4, 99, "sched", task);
    REQUIRE(serial.failures == 0);
    REQUIRE(parallel.failures == 0);
    for (std::size_t r = 0; r < 64; ++r) REQUIRE(*serial.slots[r] == *parallel.slots[r]);
}

TEST_CASE("run_replications counts forced failures and continues", "[harness]") {
    const auto task = [](std::size_t rep, std::uint64_t) -> int {
        if (rep == 2) throw std::runtime_error("forced failure");
        return static_cast<int>(rep);
    };
    const auto outcome = run_replications<int>(4, 2, 5, "fail", task);
    REQUIRE(outcome.failures == 1);
    REQUIRE(outcome.collect().size() == 3);
    REQUIRE_FALSE(outcome.slots[2].has_value());
}

TEST_CASE("changing the master seed changes the records", "[harness]") {
    const auto task = [](std::size_t, std::uint64_t seed) {
        Rng rng(seed);
        return rng.uniform();
    };
    const auto a = run_replications<double>(8, 1, 1, "seeded", task);
    const auto b = run_replications<double>(8, 1, 2, "seeded", task);
    bool any_different = false;
    for (std::size_t r = 0; r < 8; ++r) any_different |= (*a.slots[r] != *b.slots[r]);
    REQUIRE(any_different);
}

TEST_CASE("doubles serialize with 17 significant digits and round-trip", "[harness]") {
    for (double v : {1.0 / 3.0, 0.1, 2.0, 1e300, 1e-300, -123.456789012345678, 0.0}) {
        const std::string s = format_double(v);
        REQUIRE(std::stod(s) == v);
    }
    REQUIRE(format_double(0.5) == "0.5");
}

TEST_CASE("series parser accepts comments and rejects garbage", "[harness]") {
    std::istringstream good("# header comment\n1.5\n-2.25e-1\n\n3\n");
    const auto values = parse_series(good, "test");
    REQUIRE(values == std::vector<double>{1.5, -0.225, 3.0});

    std::istringstream bad("1.0\nnot-a-number\n");
    REQUIRE_THROWS_AS(parse_series(bad, "test"), DataError);
}

TEST_CASE("simulate rows have the documented shape and determinism", "[harness]") {
    ExperimentConfig cfg;
    cfg.n = 5;
    cfg.master_seed = 777;
    const auto rows = run_simulate(cfg);
    REQUIRE(rows.size() == 5);
    REQUIRE(rows.front().t == 1);
    REQUIRE(rows.back().t == 5);
    for (const auto& r : rows) REQUIRE(r.h > 0.0);

    const auto tmp1 = (std::filesystem::temp_directory_path() / "sim1.csv").string();
    const auto tmp2 = (std::filesystem::temp_directory_path() / "sim2.csv").string();
    write_simulate_csv(tmp1, rows);
    write_simulate_csv(tmp2, run_simulate(cfg));
    REQUIRE(slurp(tmp1) == slurp(tmp2));
    REQUIRE(slurp(tmp1).substr(0, 6) == "t,x,h\n");

    ExperimentConfig no_burn = cfg;
    no_burn.burn_in = 0;
    REQUIRE(run_simulate(no_burn).front().x != rows.front().x);
}

TEST_CASE("fit summary carries estimates and standard errors", "[harness]") {
    ExperimentConfig cfg;
    cfg.N = 100000;
    const SamplePath sample =
        simulate(GarchSpec(1.0, {0.5}), InnovationDistribution::gaussian(), 2000, 1000, 4242);
    const FitSummary summary = run_fit(cfg, sample.values);
    REQUIRE(summary.fit.converged);
    REQUIRE(summary.n == 2000);
    REQUIRE(summary.kappa == Approx(3.0).margin(0.6));
    REQUIRE(summary.std_errors.size() == 2);
    // asymptotic scale: sqrt(4.893/2000) ~ 0.049 and sqrt(3.926/2000) ~ 0.044
    REQUIRE(summary.std_errors[0] == Approx(0.049).margin(0.02));
    REQUIRE(summary.std_errors[1] == Approx(0.044).margin(0.02));

    REQUIRE_THROWS_AS(run_fit(cfg, std::vector<double>(10, 1.0)), ConfigError);
}

TEST_CASE("contour grid rows are complete and omega-invariant in var(alpha)", "[harness][slow]") {
    ExperimentConfig cfg;
    cfg.N = 200000;
    cfg.omega_grid = "0.5:2.0:3";
    cfg.alpha_grid = "0.3:0.6:2";
    const auto rows = run_contour(cfg);
    REQUIRE(rows.size() == 6);
    for (const auto& r : rows) {
        REQUIRE(r.var_omega > 0.0);
        REQUIRE(r.var_alpha > 0.0);
        REQUIRE(r.cov < 0.0);
    }
    // var(alpha^) nearly constant across omega0 at fixed alpha0
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j)
            if (rows[i].alpha0 == rows[j].alpha0)
                REQUIRE(rows[i].var_alpha == Approx(rows[j].var_alpha).epsilon(0.03));
}

TEST_CASE("grid parser", "[harness]") {
    REQUIRE(parse_grid("1:2:3") == std::vector<double>{1.0, 1.5, 2.0});
    REQUIRE(parse_grid("2:2:1") == std::vector<double>{2.0});
    REQUIRE_THROWS_AS(parse_grid("1:2"), ConfigError);
    REQUIRE_THROWS_AS(parse_grid("2:1:3"), ConfigError);
}

TEST_CASE("convergence ratios approach 1 for the plain estimator", "[harness][slow]") {
    ExperimentConfig cfg;
    cfg.R = 300;
    cfg.N = 200000;
    cfg.n_values = {400};
    cfg.methods = {"qmle"};
    const auto rows = run_convergence(cfg);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        REQUIRE(r.method == "qmle");
        REQUIRE(r.n == 400);
        REQUIRE(r.ratio == Approx(1.0).margin(0.35));
    }
    REQUIRE(rows[0].elem == "var_omega");
    REQUIRE(rows[1].elem == "cov");
    REQUIRE(rows[2].elem == "var_alpha");
}

TEST_CASE("sae rows cover every (dist, n) cell", "[harness][slow]") {
    ExperimentConfig cfg;
    cfg.R = 10;
    cfg.n_values = {200, 300};
    cfg.dists = {"gaussian", "t5"};
    const auto rows = run_sae(cfg);
    REQUIRE(rows.size() == 40);
    std::size_t gaussian_200 = 0;
    for (const auto& r : rows) {
        REQUIRE(r.sae >= 0.0);
        if (r.dist == "gaussian" && r.n == 200) ++gaussian_200;
    }
    REQUIRE(gaussian_200 == 10);
}

TEST_CASE("coverage rows tally below + inside + above = reps", "[harness][slow]") {
    ExperimentConfig cfg;
    cfg.R = 12;
    cfg.B = 30;
    cfg.n = 300;
    cfg.N = 100000;
    cfg.levels = {0.9};
    cfg.methods = {"wb", "empirical"};
    const auto rows = run_coverage(cfg);
    REQUIRE(rows.size() == 3);  // interval omega, interval alpha, ellipse
    for (const auto& r : rows) {
        REQUIRE(r.below + r.inside + r.above == r.reps);
        REQUIRE(r.reps == 12);
    }
    REQUIRE(rows[0].kind == "interval");
    REQUIRE(rows[2].kind == "ellipse");
    REQUIRE(rows[2].param == "all");
}

TEST_CASE("meta file records version and config echo", "[harness]") {
    ExperimentConfig cfg;
    const auto path = (std::filesystem::temp_directory_path() / "meta.txt").string();
    write_meta(path, cfg, 1.25);
    const std::string text = slurp(path);
    REQUIRE(text.find("version: garchboot") != std::string::npos);
    REQUIRE(text.find("seed=20230415") != std::string::npos);
    REQUIRE(text.find("omega0=1") != std::string::npos);
}
