#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "lpplab/experiments.hpp"
#include "lpplab/parallel.hpp"
#include "lpplab/rng.hpp"
#include "lpplab/stats.hpp"

using namespace lpplab;

TEST_CASE("wilson interval coverage is calibrated") {
    RngStream rng(3, 0);
    const double p = 0.3;
    const int n = 200, trials = 1000;
    int covered = 0;
    for (int t = 0; t < trials; ++t) {
        long k = 0;
        for (int i = 0; i < n; ++i)
            if (rng.next_uniform() < p) ++k;
        stats::Interval ci = stats::wilson_interval(k, n);
        if (ci.lo <= p && p <= ci.hi) ++covered;
    }
    CHECK(covered >= 930);
    CHECK(covered <= 970);
}

TEST_CASE("log-log fit recovers a power law and reports exclusions") {
    std::vector<double> x{1, 2, 4, 8, 16};
    std::vector<double> y;
    for (double v : x) y.push_back(2.5 * std::pow(v, -0.7));
    stats::SlopeFit fit = stats::fit_loglog(x, y);
    CHECK(fit.valid);
    CHECK(fit.slope == doctest::Approx(-0.7).epsilon(1e-9));
    CHECK(std::exp(fit.intercept) == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(fit.rms_residual < 1e-12);

    y[2] = 0.0;
    stats::SlopeFit fit2 = stats::fit_loglog(x, y);
    CHECK(fit2.points_used == 4);
    REQUIRE(fit2.excluded.size() == 1);
    CHECK(fit2.excluded[0] == 2);

    stats::SlopeFit bad = stats::fit_loglog(std::vector<double>{1.0}, std::vector<double>{2.0});
    CHECK_FALSE(bad.valid);
}

TEST_CASE("zero-count upper bound") {
    CHECK(stats::zero_count_upper_bound(100) ==
          doctest::Approx(1.0 - std::pow(0.05, 0.01)).epsilon(1e-12));
    CHECK(stats::zero_count_upper_bound(100) < 0.03);
    CHECK_THROWS_AS(stats::zero_count_upper_bound(0), std::invalid_argument);
}

TEST_CASE("list parsing") {
    CHECK(parse_double_list("0.05,0.1,0.2") == std::vector<double>{0.05, 0.1, 0.2});
    CHECK(parse_int_list("4,8,16") == std::vector<int>{4, 8, 16});

    std::vector<double> geo = parse_double_list("1:8:4");
    REQUIRE(geo.size() == 4);
    CHECK(geo[0] == doctest::Approx(1.0));
    CHECK(geo[1] == doctest::Approx(2.0));
    CHECK(geo[3] == doctest::Approx(8.0));

    CHECK_THROWS_AS(parse_double_list("1,foo"), std::invalid_argument);
    CHECK_THROWS_AS(parse_double_list("-1:4:3"), std::invalid_argument);
}

TEST_CASE("config file parsing and overrides") {
    const char* path = "test_cfg.tmp";
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "experiment = simulate\n";
        out << "seed = 42\n";
        out << "n = 100,200\n";
        out << "xi = 0.5,0.5\n";
        out << "rho=0.3\n";
    }
    ExperimentConfig cfg;
    apply_config_file(cfg, path);
    CHECK(cfg.experiment == "simulate");
    CHECK(cfg.seed == 42);
    CHECK(cfg.n_list == std::vector<int>{100, 200});
    CHECK(cfg.rho == doctest::Approx(0.3));
    CHECK(cfg.rho_given);

    {
        std::ofstream out(path);
        out << "explode = 1\n";
    }
    ExperimentConfig cfg2;
    CHECK_THROWS_WITH_AS(apply_config_file(cfg2, path), "config: unknown key 'explode'",
                         std::invalid_argument);
    std::remove(path);
    CHECK_THROWS_AS(apply_config_file(cfg2, "missing_file.cfg"), std::invalid_argument);
}

TEST_CASE("empty grids give empty tables") {
    ExperimentConfig cfg;
    cfg.experiment = "local-stationarity";
    cfg.reps = 4;
    Table t = run(cfg);
    CHECK(t.rows.empty());
    CHECK_FALSE(t.columns.empty());

    cfg.experiment = "bogus";
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
}

TEST_CASE("defaults resolve per family") {
    ExperimentConfig cfg;
    cfg.experiment = "local-stationarity";
    resolve_defaults(cfg);
    CHECK(cfg.n_list == std::vector<int>{2000});
    CHECK(cfg.reps == 400);
    CHECK(cfg.c_list.size() == 4);

    ExperimentConfig co;
    co.experiment = "coalescence";
    resolve_defaults(co);
    CHECK(co.R_list.size() == 4);
    CHECK(co.k_list == std::vector<int>{8});
    CHECK(co.n_list == std::vector<int>{4000});
}

TEST_CASE("runs are deterministic functions of (config, seed)") {
    ExperimentConfig cfg;
    cfg.experiment = "simulate";
    cfg.n_list = {48};
    cfg.reps = 40;
    cfg.seed = 7;
    cfg.jobs = 2;
    std::string a = to_csv(run(cfg));
    std::string b = to_csv(run(cfg));
    CHECK(a == b);

    cfg.seed = 8;
    CHECK(to_csv(run(cfg)) != a);
}

TEST_CASE("csv layout: resolved config header, then rows, then notes") {
    ExperimentConfig cfg;
    cfg.experiment = "bound-check";
    cfg.lambda = 0.4;
    cfg.rho = 0.6;
    cfg.m_list = {5};
    cfg.reps = 2000;
    cfg.seed = 11;
    Table t = run(cfg);
    std::string csv = to_csv(t);
    CHECK(csv.rfind("# resolved-config: experiment=bound-check", 0) == 0);
    CHECK(csv.find("beta,alpha,m,theta,bound,bound_raw,mc_p,mc_stderr,pass,error") !=
          std::string::npos);
    CHECK(t.rows.size() == 1);
    CHECK(t.rows[0][8] == "pass");

    std::string js = to_json(t);
    CHECK(js.find("\"resolved_config\"") != std::string::npos);
}

TEST_CASE("infeasible grid cells become error rows and the run continues") {
    ExperimentConfig cfg;
    cfg.experiment = "local-stationarity";
    cfg.n_list = {300};
    cfg.c_list = {0.45, 0.1};  // the first cell needs densities outside (0,1) at this scale
    cfg.reps = 5;
    cfg.seed = 3;
    cfg.drift = 40.0;
    Table t = run(cfg);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].back() != "");
    CHECK(t.rows[1].back() != "");
}

TEST_CASE("variance exponent machinery on a small grid") {
    VarianceExponentResult res =
        variance_exponent(RngStream(13, 1), {24, 48, 96}, 400, default_jobs());
    REQUIRE(res.n_grid.size() == 3);
    for (double m : res.mean_over_n) CHECK(m == doctest::Approx(4.0).epsilon(0.2));
    CHECK(res.fit.valid);
    CHECK(res.fit.slope > 0.3);
    CHECK(res.fit.slope < 1.1);

    VarianceExponentResult single = variance_exponent(RngStream(13, 2), {24}, 100);
    CHECK_FALSE(single.fit.valid);  // slope undefined on a one-point grid
}

TEST_CASE("profile gaussianity: exact single-step law and CLT at window scale") {
    // window length 1: increments follow the exact difference-of-exponentials law
    ProfileGaussianityResult one = profile_gaussianity(RngStream(17, 3), 400, 1e-4, 40);
    CHECK(one.window == 1);
    CHECK(one.ks_step_exact < one.crit_step);
    CHECK(one.step_variance == doctest::Approx(one.step_variance_target).epsilon(0.15));

    // longer windows look more Gaussian than single steps do
    ProfileGaussianityResult big = profile_gaussianity(RngStream(17, 4), 400, 0.25, 90);
    CHECK(big.window > 16);
    CHECK(big.ks_window_normal < big.crit_window);
    double ks_step_vs_normal = 0.0;
    {
        // single-step sums compared against the same normal yardstick
        ProfileGaussianityResult step = profile_gaussianity(RngStream(17, 4), 400, 1e-4, 40);
        ks_step_vs_normal = step.ks_window_normal;
    }
    CHECK(big.ks_window_normal < ks_step_vs_normal);
}
