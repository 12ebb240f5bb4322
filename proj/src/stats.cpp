#include "lpplab/stats.hpp"

#include <algorithm>
#include <stdexcept>

namespace lpplab::stats {

double exp_cdf(double x, double rate) {
    if (x <= 0.0) return 0.0;
    return -std::expm1(-rate * x);
}

double normal_cdf(double x, double mean, double sd) {
    return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

double exp_difference_cdf(double x, double a, double b) {
    if (x >= 0.0) return 1.0 - b / (a + b) * std::exp(-a * x);
    return a / (a + b) * std::exp(b * x);
}

double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf,
                    const std::function<double(double)>& cdf_left) {
    if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    // tied samples are treated as one jump of the empirical CDF, so laws
    // with atoms are compared correctly
    std::size_t i = 0;
    while (i < sample.size()) {
        std::size_t j = i;
        while (j + 1 < sample.size() && sample[j + 1] == sample[i]) ++j;
        const double f = cdf(sample[i]);
        const double fl = cdf_left ? cdf_left(sample[i]) : f;
        d = std::max(d, std::fabs((static_cast<double>(j) + 1.0) / n - f));
        d = std::max(d, std::fabs(fl - static_cast<double>(i) / n));
        i = j + 1;
    }
    return d;
}

double ks_critical(std::size_t n, double alpha) {
    // 1% and 5% points of the Kolmogorov distribution
    double c;
    if (alpha == 0.01) c = 1.62762;
    else if (alpha == 0.05) c = 1.35810;
    else throw std::invalid_argument("ks_critical: alpha must be 0.01 or 0.05");
    return c / std::sqrt(static_cast<double>(n));
}

Interval wilson_interval(long successes, long trials, double z) {
    if (trials <= 0) throw std::invalid_argument("wilson_interval: trials must be positive");
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double zero_count_upper_bound(long trials, double level) {
    if (trials <= 0) throw std::invalid_argument("zero_count_upper_bound: trials must be positive");
    return 1.0 - std::pow(1.0 - level, 1.0 / static_cast<double>(trials));
}

SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_loglog: size mismatch");
    SlopeFit fit;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        } else {
            fit.excluded.push_back(static_cast<int>(i));
        }
    }
    fit.points_used = static_cast<int>(lx.size());
    if (lx.size() < 2) return fit;

    double mx = mean(lx), my = mean(ly);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(lx.size()));
    fit.valid = true;
    return fit;
}

double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean: empty");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
    if (v.size() < 2) throw std::invalid_argument("variance: need at least two values");
    double m = mean(v), s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw std::invalid_argument("quantile: empty");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0,1]");
    std::sort(v.begin(), v.end());
    double pos = q * static_cast<double>(v.size() - 1);
    std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= v.size()) return v.back();
    double frac = pos - static_cast<double>(i);
    return v[i] * (1.0 - frac) + v[i + 1] * frac;
}

double correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("correlation: need two equal-length samples");
    double mx = mean(x), my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

} // namespace lpplab::stats
