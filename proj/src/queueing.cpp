#include "lpplab/queueing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lpplab::queue {

namespace {

void check(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

void check_rates(double lambda, double rho) {
    check(lambda > 0.0 && lambda < rho && rho < 1.0, "queue rates: need 0 < lambda < rho < 1");
}

} // namespace

QueueOutputs lindley_evolve(const QueueWindow& win) {
    const std::size_t n = win.interarrival.size();
    check(n > 0, "lindley_evolve: empty window");
    check(win.service.size() == n, "lindley_evolve: interarrival/service length mismatch");
    check(win.wait0 >= 0.0 && win.service0 >= 0.0, "lindley_evolve: negative initial state");

    QueueOutputs out;
    out.wait.resize(n);
    out.idle.resize(n);
    out.departure.resize(n);
    out.sojourn.resize(n);
    out.dual_service.resize(n);

    double sojourn_prev = win.wait0 + win.service0;  // t_0
    for (std::size_t j = 0; j < n; ++j) {
        const double slack = sojourn_prev - win.interarrival[j];
        const double w = slack > 0.0 ? slack : 0.0;
        const double e = slack < 0.0 ? -slack : 0.0;
        out.wait[j] = w;
        out.idle[j] = e;
        out.departure[j] = e + win.service[j];
        out.sojourn[j] = w + win.service[j];
        out.dual_service[j] = std::min(win.interarrival[j], sojourn_prev);
        sojourn_prev = out.sojourn[j];
    }
    return out;
}

double sample_stationary_wait(RngStream& rng, double lambda, double rho) {
    check_rates(lambda, rho);
    return rng.next_stationary_wait(lambda, rho);
}

double stationary_wait_cdf(double w, double lambda, double rho) {
    if (w < 0.0) return 0.0;
    return 1.0 - lambda / rho * std::exp(-(rho - lambda) * w);
}

double stationary_wait_cdf_left(double w, double lambda, double rho) {
    if (w <= 0.0) return 0.0;
    return stationary_wait_cdf(w, lambda, rho);
}

QueueWindow sample_stationary_window(RngStream& rng, double lambda, double rho, int n) {
    check_rates(lambda, rho);
    check(n >= 1, "sample_stationary_window: n must be >= 1");
    QueueWindow win;
    win.wait0 = rng.next_stationary_wait(lambda, rho);
    win.service0 = rng.next_exponential(rho);
    win.interarrival.resize(n);
    win.service.resize(n);
    for (double& a : win.interarrival) a = rng.next_exponential(lambda);
    for (double& s : win.service) s = rng.next_exponential(rho);
    return win;
}

NuSample sample_nu(RngStream& rng, double lambda, double rho, int n) {
    QueueWindow win = sample_stationary_window(rng, lambda, rho, n);
    QueueOutputs out = lindley_evolve(win);
    return {std::move(out.departure), std::move(win.service)};
}

double cumulative_idle(const QueueWindow& win, int k, int l) {
    const int n = static_cast<int>(win.interarrival.size());
    check(k >= 1 && k <= l && l <= n, "cumulative_idle: need 1 <= k <= l <= n");

    // w_{k-1} by evolving the recursion up to customer k-1
    double sojourn_prev = win.wait0 + win.service0;
    double wait_prev = win.wait0;
    for (int j = 1; j < k; ++j) {
        const double slack = sojourn_prev - win.interarrival[j - 1];
        wait_prev = slack > 0.0 ? slack : 0.0;
        sojourn_prev = wait_prev + win.service[j - 1];
    }

    // running infimum of w_{k-1} + sum_{j=k}^{i} (s_{j-1} - a_j)
    double acc = wait_prev;
    double lo = std::numeric_limits<double>::infinity();
    for (int i = k; i <= l; ++i) {
        const double s_prev = (i == 1) ? win.service0 : win.service[i - 2];
        acc += s_prev - win.interarrival[i - 1];
        lo = std::min(lo, acc);
    }
    return lo < 0.0 ? -lo : 0.0;
}

double empty_queue_bound_raw(double beta, double alpha, long m, double theta) {
    check(beta > 0.0 && beta < alpha && alpha < 1.0, "empty_queue_bound: need 0 < beta < alpha < 1");
    check(m >= 1, "empty_queue_bound: m must be >= 1");
    check(theta > 0.0 && theta < beta,
          "empty_queue_bound: theta must lie in (0, beta), otherwise the moment factor diverges");
    const double q = alpha / (alpha + theta) * beta / (beta - theta);
    const double tail = std::pow(q, static_cast<double>(m)) * (beta * (alpha - beta) / alpha) /
                        (alpha - beta + theta);
    return 1.0 - beta / alpha + tail;
}

double empty_queue_bound(double beta, double alpha, long m, double theta) {
    return std::min(1.0, empty_queue_bound_raw(beta, alpha, m, theta));
}

double default_theta(double beta, long m) {
    const double t = 1.0 / std::sqrt(static_cast<double>(std::max(m, 1L)));
    return std::min(t, 0.5 * beta);
}

double mc_empty_queue_prob(RngStream rng, double beta, double alpha, long m, int reps) {
    check_rates(beta, alpha);
    check(m >= 1 && reps >= 1, "mc_empty_queue_prob: m and reps must be >= 1");
    long hits = 0;
    for (int rep = 0; rep < reps; ++rep) {
        double sojourn_prev = rng.next_stationary_wait(beta, alpha) + rng.next_exponential(alpha);
        for (long j = 0; j < m; ++j) {
            const double slack = sojourn_prev - rng.next_exponential(beta);
            if (slack < 0.0) {
                ++hits;
                break;
            }
            sojourn_prev = slack + rng.next_exponential(alpha);
        }
    }
    return static_cast<double>(hits) / static_cast<double>(reps);
}

std::vector<double> departures_from_rest(std::span<const double> a, std::span<const double> s) {
    check(a.size() == s.size() && !a.empty(), "departures_from_rest: bad window");
    std::vector<double> d(a.size());
    double sojourn_prev = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double slack = sojourn_prev - a[j];
        d[j] = (slack < 0.0 ? -slack : 0.0) + s[j];
        sojourn_prev = (slack > 0.0 ? slack : 0.0) + s[j];
    }
    return d;
}

std::vector<double> dual_services_from_rest(std::span<const double> a, std::span<const double> s) {
    check(a.size() == s.size() && !a.empty(), "dual_services_from_rest: bad window");
    std::vector<double> dual(a.size());
    double sojourn_prev = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double slack = sojourn_prev - a[j];
        dual[j] = std::min(a[j], sojourn_prev);
        sojourn_prev = (slack > 0.0 ? slack : 0.0) + s[j];
    }
    return dual;
}

bool interchange_check(std::span<const double> b, std::span<const double> a,
                       std::span<const double> s, int burn, double tol, double* max_diff) {
    check(b.size() == a.size() && a.size() == s.size() && !a.empty(),
          "interchange_check: windows must have equal positive length");
    const int n = static_cast<int>(a.size());
    check(burn >= 0 && burn < n, "interchange_check: burn-in exceeds window");

    double mb = 0.0, ma = 0.0, ms = 0.0;
    for (int i = 0; i < n; ++i) {
        mb += b[i];
        ma += a[i];
        ms += s[i];
    }
    check(mb > ma && ma > ms,
          "interchange_check: unstable rate ordering (need mean b > mean a > mean s)");

    std::vector<double> lhs = departures_from_rest(departures_from_rest(b, a), s);
    std::vector<double> rhs =
        departures_from_rest(departures_from_rest(b, dual_services_from_rest(a, s)),
                             departures_from_rest(a, s));

    double worst = 0.0;
    for (int i = burn; i < n; ++i) worst = std::max(worst, std::fabs(lhs[i] - rhs[i]));
    if (max_diff) *max_diff = worst;
    return worst <= tol;
}

} // namespace lpplab::queue
