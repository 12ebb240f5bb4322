#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lpplab/queueing.hpp"
#include "lpplab/stats.hpp"

using namespace lpplab;
using namespace lpplab::queue;

namespace {

QueueWindow constant_window(double a, double s, int n, double w0, double s0) {
    QueueWindow w;
    w.interarrival.assign(n, a);
    w.service.assign(n, s);
    w.wait0 = w0;
    w.service0 = s0;
    return w;
}

} // namespace

TEST_CASE("lindley recursion on pinned windows") {
    // fast arrivals never queue: unit idle time, departures every two
    QueueOutputs out = lindley_evolve(constant_window(2.0, 1.0, 8, 0.0, 1.0));
    for (int j = 0; j < 8; ++j) {
        CHECK(out.wait[j] == 0.0);
        CHECK(out.idle[j] == doctest::Approx(1.0));
        CHECK(out.departure[j] == doctest::Approx(2.0));
        CHECK(out.sojourn[j] == doctest::Approx(1.0));
    }

    // slow service builds a linear backlog
    QueueOutputs back = lindley_evolve(constant_window(1.0, 2.0, 8, 0.0, 2.0));
    for (int j = 0; j < 8; ++j) {
        CHECK(back.wait[j] == doctest::Approx(static_cast<double>(j + 1)));
        CHECK(back.idle[j] == 0.0);
        CHECK(back.departure[j] == doctest::Approx(2.0));
    }

    // single customer: w_1 = (w0 + s0 - a_1)^+
    QueueWindow one;
    one.wait0 = 5.0;
    one.service0 = 1.0;
    one.interarrival = {3.0};
    one.service = {7.0};
    QueueOutputs o1 = lindley_evolve(one);
    CHECK(o1.wait[0] == doctest::Approx(3.0));
    CHECK(o1.idle[0] == 0.0);
    CHECK(o1.dual_service[0] == doctest::Approx(3.0));  // a_1 ^ t_0 = 3 ^ 6

    QueueWindow empty;
    CHECK_THROWS_AS(lindley_evolve(empty), std::invalid_argument);
}

TEST_CASE("output identities hold on random windows") {
    RngStream rng(3, 0);
    for (int rep = 0; rep < 50; ++rep) {
        RngStream sub = rng.substream(rep);
        QueueWindow win = sample_stationary_window(sub, 0.3, 0.7, 200);
        QueueOutputs out = lindley_evolve(win);
        double t_prev = win.wait0 + win.service0;
        for (int j = 0; j < 200; ++j) {
            CHECK(out.departure[j] == out.idle[j] + win.service[j]);
            CHECK(out.sojourn[j] == out.wait[j] + win.service[j]);
            CHECK(out.dual_service[j] == std::min(win.interarrival[j], t_prev));
            CHECK(out.wait[j] == std::max(t_prev - win.interarrival[j], 0.0));
            CHECK(out.wait[j] >= 0.0);
            CHECK(out.idle[j] >= 0.0);
            t_prev = out.sojourn[j];
        }
    }
}

TEST_CASE("stationary waiting time law") {
    RngStream rng(5, 1);
    const double lambda = 0.25, rho = 0.5;
    const int n = 1000000;
    long zeros = 0;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double w = sample_stationary_wait(rng, lambda, rho);
        if (w == 0.0) ++zeros;
        sum += w;
    }
    CHECK(static_cast<double>(zeros) / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(sum / n == doctest::Approx(2.0).epsilon(0.01));

    CHECK_THROWS_AS(sample_stationary_wait(rng, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(sample_stationary_wait(rng, 0.7, 0.5), std::invalid_argument);
}

TEST_CASE("stationary law is preserved along the recursion") {
    const int steps = 3000, samples = 1500;
    int pair_id = 0;
    for (auto [lambda, rho] : {std::pair{0.4, 0.6}, std::pair{0.25, 0.7}, std::pair{0.55, 0.8}}) {
        RngStream rng(7, 2000 + pair_id++);
        std::vector<double> w_final(samples);
        for (int i = 0; i < samples; ++i) {
            RngStream sub = rng.substream(i);
            QueueWindow win = sample_stationary_window(sub, lambda, rho, steps);
            w_final[i] = lindley_evolve(win).wait.back();
        }
        double d = stats::ks_statistic(
            w_final, [&, lambda, rho](double x) { return stationary_wait_cdf(x, lambda, rho); },
            [&, lambda, rho](double x) { return stationary_wait_cdf_left(x, lambda, rho); });
        CHECK(d < stats::ks_critical(samples, 0.01));
    }
}

TEST_CASE("stationary departures are exponential at the arrival rate") {
    RngStream rng(11, 3);
    NuSample nu = sample_nu(rng, 0.35, 0.6, 100000);
    double d = stats::ks_statistic(nu.departure, [](double x) { return stats::exp_cdf(x, 0.35); });
    CHECK(d < stats::ks_critical(nu.departure.size(), 0.01));
    for (std::size_t j = 0; j < nu.departure.size(); ++j) CHECK(nu.departure[j] >= nu.service[j]);
}

TEST_CASE("departure/service agreement runs coincide with zero idle time") {
    RngStream rng(13, 4);
    const int m = 12;
    for (int rep = 0; rep < 4000; ++rep) {
        RngStream sub = rng.substream(rep);
        QueueWindow win = sample_stationary_window(sub, 0.45, 0.55, m);
        QueueOutputs out = lindley_evolve(win);
        bool all_equal = true;
        double idle_sum = 0.0;
        for (int j = 0; j < m; ++j) {
            all_equal = all_equal && out.departure[j] == win.service[j];
            idle_sum += out.idle[j];
        }
        CHECK(all_equal == (idle_sum == 0.0));
    }
}

TEST_CASE("cumulative idle time closed form") {
    QueueWindow slack = constant_window(2.0, 1.0, 8, 0.0, 1.0);
    CHECK(cumulative_idle(slack, 1, 5) == doctest::Approx(5.0));
    QueueWindow backlog = constant_window(1.0, 2.0, 8, 0.0, 2.0);
    CHECK(cumulative_idle(backlog, 1, 8) == 0.0);
    CHECK_THROWS_AS(cumulative_idle(slack, 0, 5), std::invalid_argument);
    CHECK_THROWS_AS(cumulative_idle(slack, 3, 2), std::invalid_argument);
    CHECK_THROWS_AS(cumulative_idle(slack, 1, 9), std::invalid_argument);

    RngStream rng(17, 5);
    double worst = 0.0;
    for (int rep = 0; rep < 2000; ++rep) {
        RngStream sub = rng.substream(rep);
        const int n = 1 + static_cast<int>(sub.next_u64() % 100);
        QueueWindow win = sample_stationary_window(sub, 0.3, 0.8, n);
        QueueOutputs out = lindley_evolve(win);
        const int k = 1 + static_cast<int>(sub.next_u64() % n);
        const int l = k + static_cast<int>(sub.next_u64() % (n - k + 1));
        double direct = 0.0;
        for (int i = k; i <= l; ++i) direct += out.idle[i - 1];
        worst = std::max(worst, std::fabs(direct - cumulative_idle(win, k, l)));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("empty-queue bound: closed form, limits, and Monte Carlo domination") {
    // closed form equals the defining integral (midpoint quadrature)
    const double beta = 0.4, alpha = 0.6, theta = 0.2;
    const long m = 10;
    const double q = alpha / (alpha + theta) * beta / (beta - theta);
    double integral = 0.0;
    const double dw = 1e-4;
    for (double w = 0.5 * dw; w < 60.0; w += dw)
        integral += std::pow(q, static_cast<double>(m)) * std::exp(-theta * w) *
                    (alpha - beta) * beta / alpha * std::exp(-(alpha - beta) * w) * dw;
    CHECK(empty_queue_bound_raw(beta, alpha, m, theta) ==
          doctest::Approx(1.0 - beta / alpha + integral).epsilon(1e-4));

    // vacuous limit as theta -> 0
    CHECK(empty_queue_bound_raw(beta, alpha, m, 1e-12) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(empty_queue_bound(beta, alpha, m, theta) <= 1.0);
    CHECK(empty_queue_bound(beta, alpha, m, theta) > 0.0);
    CHECK_THROWS_AS(empty_queue_bound_raw(beta, alpha, m, beta), std::invalid_argument);
    CHECK_THROWS_AS(empty_queue_bound_raw(alpha, beta, m, 0.1), std::invalid_argument);

    // heavy-traffic first term: 1 - beta/alpha with the drifted densities
    const double rho = 0.5, r = 1.3, n13 = std::pow(2000.0, -1.0 / 3.0);
    const double lo = rho - r * n13, hi = rho + r * n13;
    CHECK(1.0 - lo / hi == doctest::Approx(2.0 * r * n13 / (rho + r * n13)).epsilon(1e-12));

    // the clamped bound dominates the Monte Carlo estimate
    for (auto [b2, a2, m2] : {std::tuple{0.4, 0.6, 10L}, std::tuple{0.45, 0.5, 10L},
                              std::tuple{0.45, 0.5, 40L}}) {
        const double th = default_theta(b2, m2);
        const double bound = empty_queue_bound(b2, a2, m2, th);
        const double mc = mc_empty_queue_prob(RngStream(19, 6), b2, a2, m2, 40000);
        const double se = std::sqrt(mc * (1.0 - mc) / 40000);
        CHECK(mc <= bound + 2.0 * se);
        CHECK(bound > 0.0);
        CHECK(bound <= 1.0);
    }
}

TEST_CASE("operator interchange identity") {
    // deterministic sequences with slack: both sides settle immediately
    std::vector<double> b(50, 5.0), a(50, 2.0), s(50, 1.0);
    double diff = 0.0;
    CHECK(interchange_check(b, a, s, 5, 1e-9, &diff));
    CHECK(diff <= 1e-9);

    // random stable triple, long window
    RngStream rng(23, 7);
    const int n = 10000;
    std::vector<double> br(n), ar(n), sr(n);
    for (double& x : br) x = rng.next_exponential(0.2);
    for (double& x : ar) x = rng.next_exponential(0.4);
    for (double& x : sr) x = rng.next_exponential(0.8);
    CHECK(interchange_check(br, ar, sr, 800, 1e-9));

    // length-one suffix
    CHECK(interchange_check(br, ar, sr, n - 1, 1e-9));

    // unstable ordering rejected
    CHECK_THROWS_AS(interchange_check(sr, ar, br, 10, 1e-9), std::invalid_argument);
}

TEST_CASE("paired operator: past departures decouple from future arrivals") {
    RngStream rng(29, 8);
    const int windows = 20000, burn = 400;
    std::vector<double> past(windows), future(windows);
    for (int i = 0; i < windows; ++i) {
        RngStream sub = rng.substream(i);
        const int len = burn + 2;
        std::vector<double> b2(len), a1(len);
        for (double& x : b2) x = sub.next_exponential(0.3);
        for (double& x : a1) x = sub.next_exponential(0.5);
        std::vector<double> a2 = departures_from_rest(b2, a1);
        past[i] = a2[len - 2];
        future[i] = a1[len - 1];
    }
    CHECK(std::fabs(stats::correlation(past, future)) < 0.02);
    double d = stats::ks_statistic(past, [](double x) { return stats::exp_cdf(x, 0.3); });
    CHECK(d < stats::ks_critical(windows, 0.01));
}
