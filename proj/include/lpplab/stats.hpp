#pragma once

// Statistical helpers shared by the experiment runners and the test suites:
// one-sample Kolmogorov-Smirnov, binomial intervals, least-squares fits on
// log-log grids, and basic summaries.

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace lpplab::stats {

double exp_cdf(double x, double rate);
double normal_cdf(double x, double mean, double sd);

// CDF of I - J with I ~ Exp(a), J ~ Exp(b) independent.
double exp_difference_cdf(double x, double a, double b);

// One-sample KS statistic against a CDF. `cdf_left` supplies the left limit
// F(x-) and defaults to F itself (continuous law); pass it explicitly when
// the target law has atoms.
double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf,
                    const std::function<double(double)>& cdf_left = nullptr);

// Asymptotic critical value c(alpha)/sqrt(n); alpha must be 0.01 or 0.05.
double ks_critical(std::size_t n, double alpha);

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

// Wilson score interval for a binomial proportion (default 95%).
Interval wilson_interval(long successes, long trials, double z = 1.959963984540054);

// One-sided exact upper bound for p when zero successes were observed.
double zero_count_upper_bound(long trials, double level = 0.95);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
    int points_used = 0;
    std::vector<int> excluded;  // indices dropped (non-finite / zero values)
    bool valid = false;
};

// Least squares of log(y) against log(x); skips entries with x<=0 or y<=0.
SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);
double variance(std::span<const double> v);  // unbiased
double quantile(std::vector<double> v, double q);
double correlation(std::span<const double> x, std::span<const double> y);

} // namespace lpplab::stats
