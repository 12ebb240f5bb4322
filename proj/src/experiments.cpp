#include "lpplab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "lpplab/busemann.hpp"
#include "lpplab/geodesics.hpp"
#include "lpplab/parallel.hpp"
#include "lpplab/queueing.hpp"

namespace lpplab {

namespace {

using Clock = std::chrono::steady_clock;

struct Budget {
    bool enabled = false;
    Clock::time_point deadline;

    static Budget from(const ExperimentConfig& cfg) {
        Budget b;
        if (cfg.budget_seconds > 0) {
            b.enabled = true;
            b.deadline = Clock::now() + std::chrono::seconds(cfg.budget_seconds);
        }
        return b;
    }
    bool exceeded() const { return enabled && Clock::now() > deadline; }
};

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

RngStream family_stream(const ExperimentConfig& cfg, const std::string& family, std::uint64_t row) {
    return RngStream(cfg.seed, fnv1a64(family) + row * 0x9e3779b97f4a7c15ULL);
}

std::string fmt_i(long v) { return std::to_string(v); }

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += format_double(v[i]);
    }
    return s;
}

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s;
}

std::string fit_note(const std::string& family, const stats::SlopeFit& fit) {
    std::string s = "fit: family=" + family;
    if (!fit.valid) return s + " status=undefined";
    s += " slope=" + format_double(fit.slope) + " intercept=" + format_double(fit.intercept) +
         " rms=" + format_double(fit.rms_residual) + " points=" + std::to_string(fit.points_used);
    if (!fit.excluded.empty()) {
        s += " excluded=";
        for (std::size_t i = 0; i < fit.excluded.size(); ++i) {
            if (i) s += ";";
            s += std::to_string(fit.excluded[i]);
        }
    }
    return s;
}

void error_row(Table& t, std::vector<std::string> prefix, const std::string& what) {
    while (prefix.size() + 1 < t.columns.size()) prefix.push_back("");
    prefix.push_back(what);
    t.rows.push_back(std::move(prefix));
}

void truncate_note(Table& t) {
    t.truncated = true;
    t.notes.push_back("truncated: wall-time budget exceeded; remaining grid cells skipped");
}

// ---------------------------------------------------------------- families

bool require_grid(Table& t, bool ok, const char* what) {
    if (!ok) t.notes.push_back(std::string("empty grid: ") + what + " unset, no rows produced");
    return ok;
}

Table local_stationarity_table(const ExperimentConfig& cfg) {
    Table t;
    t.columns = {"c", "m", "r", "reps", "failures", "p_hat", "stderr", "ci_lo", "ci_hi", "error"};
    if (!require_grid(t, !cfg.n_list.empty() && !cfg.c_list.empty(), "n/c")) return t;
    const int N = cfg.n_list.at(0);
    Budget budget = Budget::from(cfg);

    std::vector<double> cs, ps;
    for (std::size_t i = 0; i < cfg.c_list.size(); ++i) {
        if (budget.exceeded()) {
            truncate_note(t);
            break;
        }
        const double c = cfg.c_list[i];
        try {
            LocalAgreementResult res = local_agreement(family_stream(cfg, "local-stationarity", i), N,
                                                       c, cfg.reps, cfg.xi, cfg.drift, 0.5, cfg.jobs);
            t.rows.push_back({format_double(c), fmt_i(res.box_size), format_double(res.drift),
                              fmt_i(res.reps), fmt_i(res.failures), format_double(res.failure_rate),
                              format_double(res.stderr_), format_double(res.ci.lo),
                              format_double(res.ci.hi), ""});
            cs.push_back(c);
            ps.push_back(res.failure_rate);
        } catch (const std::exception& e) {
            error_row(t, {format_double(c)}, e.what());
        }
    }
    t.notes.push_back(fit_note("failure-vs-c target-exponent=0.375", stats::fit_loglog(cs, ps)));
    double fitted_C = 0.0;
    for (std::size_t i = 0; i < cs.size(); ++i)
        fitted_C = std::max(fitted_C, ps[i] / std::pow(cs[i], 3.0 / 8.0));
    t.notes.push_back("dominating-curve: C=" + format_double(fitted_C) +
                      " (smallest C with p_hat <= C*c^(3/8) on the grid)");
    return t;
}

Table stabilization_table(const ExperimentConfig& cfg) {
    Table t;
    t.columns = {"n",     "anchor_mult", "m",     "reps", "disagreements",
                 "p_hat", "stderr",      "ci_lo", "ci_hi", "error"};
    if (!require_grid(t, !cfg.n_list.empty() && !cfg.m_list.empty(), "n/m")) return t;
    Budget budget = Budget::from(cfg);
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        if (budget.exceeded()) {
            truncate_note(t);
            break;
        }
        const int N = cfg.n_list[i];
        try {
            StabilizationResult res = stabilization_check(family_stream(cfg, "stabilization", i),
                                                          cfg.xi, N, cfg.m_list, cfg.reps,
                                                          cfg.anchor_mult, cfg.jobs);
            for (std::size_t mi = 0; mi < res.box_sizes.size(); ++mi) {
                const TailEstimate& e = res.disagreement[mi];
                t.rows.push_back({fmt_i(N), format_double(cfg.anchor_mult), fmt_i(res.box_sizes[mi]),
                                  fmt_i(e.reps), fmt_i(e.count), format_double(e.p_hat),
                                  format_double(e.stderr_), format_double(e.ci.lo),
                                  format_double(e.ci.hi), ""});
            }
            t.notes.push_back(fit_note("disagreement-vs-m target-exponent=0.375 n=" + std::to_string(N), res.fit));
        } catch (const std::exception& e) {
            error_row(t, {fmt_i(N)}, e.what());
        }
    }
    return t;
}

Table coalescence_table(const ExperimentConfig& cfg) {
    Table t;
    t.columns = {"family", "n",     "k_or_a", "x",     "reps", "count",
                 "p_hat",  "stderr", "ci_lo",  "ci_hi", "error"};
    if (!require_grid(t, !cfg.n_list.empty() && (!cfg.R_list.empty() || !cfg.alpha_list.empty()),
                      "n and R or alpha"))
        return t;
    Budget budget = Budget::from(cfg);
    const int N = cfg.n_list.at(0);

    if (!cfg.R_list.empty()) {
        for (std::size_t i = 0; i < cfg.k_list.size(); ++i) {
            if (budget.exceeded()) {
                truncate_note(t);
                break;
            }
            const int k = cfg.k_list[i];
            try {
                CoalescenceTailResult res = coalescence_tail(family_stream(cfg, "coalescence-tail", i),
                                                             k, cfg.R_list, N, cfg.reps, cfg.xi,
                                                             cfg.jobs);
                for (const TailEstimate& e : res.tails) {
                    std::vector<std::string> row{"tail", fmt_i(N), fmt_i(k), format_double(e.threshold)};
                    row.push_back(fmt_i(e.reps));
                    row.push_back(fmt_i(e.count));
                    row.push_back(format_double(e.p_hat));
                    row.push_back(format_double(e.stderr_));
                    row.push_back(format_double(e.ci.lo));
                    row.push_back(format_double(e.ci.hi));
                    row.push_back("");
                    t.rows.push_back(std::move(row));
                }
                t.notes.push_back(fit_note("tail-vs-R target-exponent=-0.6667 k=" + std::to_string(k), res.fit));
                t.notes.push_back("median-coalescence-distance k=" + std::to_string(k) + ": " +
                                  format_double(res.median_distance));
            } catch (const std::exception& e) {
                error_row(t, {"tail", fmt_i(N), fmt_i(k)}, e.what());
            }
        }
    }
    if (!cfg.alpha_list.empty()) {
        for (std::size_t i = 0; i < cfg.a_list.size(); ++i) {
            if (budget.exceeded()) {
                truncate_note(t);
                break;
            }
            const double a = cfg.a_list[i];
            try {
                MacroCoalescenceResult res = macro_coalescence(family_stream(cfg, "coalescence-macro", i),
                                                               a, cfg.alpha_list, cfg.xi, N, cfg.reps,
                                                               cfg.jobs);
                for (const TailEstimate& e : res.near_target) {
                    std::vector<std::string> row{"near_target", fmt_i(N), format_double(a),
                                                 format_double(e.threshold)};
                    row.push_back(fmt_i(e.reps));
                    row.push_back(fmt_i(e.count));
                    row.push_back(format_double(e.p_hat));
                    row.push_back(format_double(e.stderr_));
                    row.push_back(format_double(e.ci.lo));
                    row.push_back(format_double(e.ci.hi));
                    row.push_back("");
                    t.rows.push_back(std::move(row));
                }
                for (const TailEstimate& e : res.near_source) {
                    std::vector<std::string> row{"near_source", fmt_i(N), format_double(a),
                                                 format_double(e.threshold)};
                    row.push_back(fmt_i(e.reps));
                    row.push_back(fmt_i(e.count));
                    row.push_back(format_double(e.p_hat));
                    row.push_back(format_double(e.stderr_));
                    row.push_back(format_double(e.ci.lo));
                    row.push_back(format_double(e.ci.hi));
                    row.push_back("");
                    t.rows.push_back(std::move(row));
                }
                t.notes.push_back(fit_note("near-target-vs-alpha bound-exponent=0.2222 a=" + format_double(a),
                                           res.fit_near_target));
                t.notes.push_back(fit_note("near-source-vs-alpha bound-exponent=2 a=" + format_double(a),
                                           res.fit_near_source));
            } catch (const std::exception& e) {
                error_row(t, {"macro", fmt_i(N), format_double(a)}, e.what());
            }
        }
    }
    return t;
}

Table exponents_table(const ExperimentConfig& cfg) {
    Table t;
    t.columns = {"family", "n", "param", "reps", "estimate", "stderr_or_target", "extra", "error"};
    if (!require_grid(t, !cfg.n_list.empty(), "n")) return t;
    Budget budget = Budget::from(cfg);

    // growth-rate and variance of the point-to-point passage time
    try {
        VarianceExponentResult res =
            variance_exponent(family_stream(cfg, "exponents-var", 0), cfg.n_list, cfg.reps, cfg.jobs);
        for (std::size_t i = 0; i < res.n_grid.size(); ++i) {
            t.rows.push_back({"mean_over_n", fmt_i(res.n_grid[i]), "", fmt_i(cfg.reps),
                              format_double(res.mean_over_n[i]),
                              format_double(res.se_mean_over_n[i]), "target=4", ""});
            t.rows.push_back({"var", fmt_i(res.n_grid[i]), "", fmt_i(cfg.reps),
                              format_double(res.variance[i]),
                              format_double(res.variance[i] * std::sqrt(2.0 / (cfg.reps - 1))), "",
                              ""});
        }
        t.notes.push_back(fit_note("var-vs-n target-exponent=0.6667", res.fit));
    } catch (const std::exception& e) {
        error_row(t, {"var", ""}, e.what());
    }

    // transversal fluctuations of the diagonal geodesic
    if (!cfg.l_list.empty() && !budget.exceeded()) {
        int l_max = 0;
        for (int l : cfg.l_list) l_max = std::max(l_max, l);
        const int Nt = std::max(3000, 4 * l_max);
        try {
            TransversalResult res = transversal_fluctuation(family_stream(cfg, "transversal", 0),
                                                            cfg.l_list, Nt, cfg.reps,
                                                            {1.5, 2.0, 3.0, 4.0}, cfg.xi, cfg.jobs);
            double qmin = 1e300, qmax = -1e300;
            for (const TransversalQuantiles& q : res.quantiles) {
                t.rows.push_back({"transversal_median", fmt_i(Nt), fmt_i(q.l), fmt_i(cfg.reps),
                                  format_double(q.median), "", "q75=" + format_double(q.q75), ""});
                qmin = std::min(qmin, q.median);
                qmax = std::max(qmax, q.median);
            }
            for (const TailEstimate& e : res.tail)
                t.rows.push_back({"transversal_tail", fmt_i(Nt), format_double(e.threshold),
                                  fmt_i(e.reps), format_double(e.p_hat), format_double(e.stderr_), "",
                                  ""});
            t.notes.push_back(fit_note("transversal-tail-vs-r target-exponent=-3", res.tail_fit));
            t.notes.push_back("transversal-median-collapse: spread=" +
                              format_double((qmax - qmin) / (0.5 * (qmax + qmin))));
        } catch (const std::exception& e) {
            error_row(t, {"transversal", fmt_i(Nt)}, e.what());
        }
    }

    // Gaussianity of the local stationary profile
    if (!budget.exceeded()) {
        try {
            const int Np = 1000;
            ProfileGaussianityResult p =
                profile_gaussianity(family_stream(cfg, "profile", 0), Np, 0.2, 24);
            t.rows.push_back({"profile_ks_step", fmt_i(Np), "1", fmt_i(p.step_samples),
                              format_double(p.ks_step_exact), format_double(p.crit_step),
                              p.ks_step_exact < p.crit_step ? "pass" : "fail", ""});
            t.rows.push_back({"profile_ks_window", fmt_i(Np), fmt_i(p.window), fmt_i(p.window_samples),
                              format_double(p.ks_window_normal), format_double(p.crit_window),
                              p.ks_window_normal < p.crit_window ? "pass" : "fail", ""});
            t.rows.push_back({"profile_ks_window_unconstrained", fmt_i(Np), fmt_i(p.window),
                              fmt_i(p.window_samples), format_double(p.ks_window_unconstrained),
                              format_double(p.crit_window), "", ""});
            t.rows.push_back({"profile_step_variance", fmt_i(Np), "1", fmt_i(p.step_samples),
                              format_double(p.step_variance), format_double(p.step_variance_target),
                              std::fabs(p.step_variance - p.step_variance_target) < 0.25 ? "pass"
                                                                                         : "fail",
                              ""});
        } catch (const std::exception& e) {
            error_row(t, {"profile", "1000"}, e.what());
        }
    } else {
        truncate_note(t);
    }
    return t;
}

Table queue_check_table(const ExperimentConfig& cfg) {
    Table t;
    t.columns = {"check", "n", "value", "threshold", "pass", "error"};
    if (!require_grid(t, !cfg.n_list.empty(), "n")) return t;
    const long n = cfg.n_list.at(0);
    const double lambda = cfg.lambda;
    const double rho = cfg.rho;
    Budget budget = Budget::from(cfg);

    // departures of the stationary window are iid Exp(lambda)
    try {
        RngStream rng = family_stream(cfg, "queue-burke", 0);
        queue::NuSample nu = queue::sample_nu(rng, lambda, rho, static_cast<int>(n));
        double d = stats::ks_statistic(nu.departure,
                                       [&](double x) { return stats::exp_cdf(x, lambda); });
        double crit = stats::ks_critical(nu.departure.size(), 0.01);
        t.rows.push_back({"burke_departure_ks", fmt_i(n), format_double(d), format_double(crit),
                          d < crit ? "pass" : "fail", ""});
    } catch (const std::exception& e) {
        error_row(t, {"burke_departure_ks", fmt_i(n)}, e.what());
    }

    // stationary waiting law is preserved by the recursion
    if (!budget.exceeded()) {
        const int steps = 10000, samples = 2000;
        RngStream rng = family_stream(cfg, "queue-stationary", 0);
        std::vector<double> w_final(samples);
        parallel_replicas(samples, cfg.jobs, [&](int rep) {
            RngStream sub = rng.substream(rep);
            queue::QueueWindow win = queue::sample_stationary_window(sub, lambda, rho, steps);
            w_final[rep] = queue::lindley_evolve(win).wait.back();
        });
        double d = stats::ks_statistic(
            w_final, [&](double x) { return queue::stationary_wait_cdf(x, lambda, rho); },
            [&](double x) { return queue::stationary_wait_cdf_left(x, lambda, rho); });
        double crit = stats::ks_critical(samples, 0.01);
        t.rows.push_back({"stationary_wait_preserved_ks", fmt_i(steps), format_double(d),
                          format_double(crit), d < crit ? "pass" : "fail", ""});
    }

    // closed-form cumulative idle time equals the direct sum
    if (!budget.exceeded()) {
        RngStream rng = family_stream(cfg, "queue-idle", 0);
        double worst = 0.0;
        for (int rep = 0; rep < 10000; ++rep) {
            RngStream sub = rng.substream(rep);
            const int len = 1 + static_cast<int>(sub.next_u64() % 200);
            queue::QueueWindow win = queue::sample_stationary_window(sub, lambda, rho, len);
            queue::QueueOutputs out = queue::lindley_evolve(win);
            const int k = 1 + static_cast<int>(sub.next_u64() % len);
            const int l = k + static_cast<int>(sub.next_u64() % (len - k + 1));
            double direct = 0.0;
            for (int i = k; i <= l; ++i) direct += out.idle[i - 1];
            worst = std::max(worst, std::fabs(direct - queue::cumulative_idle(win, k, l)));
        }
        t.rows.push_back({"cumulative_idle_max_residual", "10000", format_double(worst), "1e-09",
                          worst <= 1e-9 ? "pass" : "fail", ""});
    }

    // operator interchange identity on post-burn-in suffixes
    if (!budget.exceeded()) {
        RngStream rng = family_stream(cfg, "queue-interchange", 0);
        int passes = 0;
        double worst = 0.0;
        const int triples = 100;
        for (int rep = 0; rep < triples; ++rep) {
            RngStream sub = rng.substream(rep);
            const double beta = 0.15 + 0.25 * sub.next_uniform();
            const double alpha = beta + 0.15 + 0.15 * sub.next_uniform();
            const double sigma = alpha + 0.15 + 0.15 * sub.next_uniform();
            const double gap = std::min(alpha - beta, sigma - alpha);
            const int burn = 2 * static_cast<int>(std::ceil(40.0 / gap));
            const int len = 4 * burn + 2000;
            std::vector<double> b(len), a(len), s(len);
            for (double& x : b) x = sub.next_exponential(beta);
            for (double& x : a) x = sub.next_exponential(alpha);
            for (double& x : s) x = sub.next_exponential(sigma);
            double diff = 0.0;
            if (queue::interchange_check(b, a, s, burn, 1e-9, &diff)) ++passes;
            worst = std::max(worst, diff);
        }
        t.rows.push_back({"interchange_pass_fraction", fmt_i(triples),
                          format_double(static_cast<double>(passes) / triples), "1",
                          passes == triples ? "pass" : "fail", ""});
        t.rows.push_back({"interchange_max_deviation", fmt_i(triples), format_double(worst), "1e-09",
                          worst <= 1e-9 ? "pass" : "fail", ""});
    }

    // distributional fixed point of the paired operator
    if (!budget.exceeded()) {
        RngStream rng = family_stream(cfg, "queue-fixedpoint", 0);
        const double a2_rate = 0.3, a1_rate = 0.5, s_rate = 0.8;
        const int burn = 600, windows = 100000;
        std::vector<double> d1_last(windows), d2_last(windows), d2_prev(windows);
        parallel_replicas(windows, cfg.jobs, [&](int rep) {
            RngStream sub = rng.substream(rep);
            const int len = burn + 2;
            std::vector<double> b2(len), a1(len), s(len);
            for (double& x : b2) x = sub.next_exponential(a2_rate);
            for (double& x : a1) x = sub.next_exponential(a1_rate);
            for (double& x : s) x = sub.next_exponential(s_rate);
            std::vector<double> a2 = queue::departures_from_rest(b2, a1);
            std::vector<double> d1 = queue::departures_from_rest(a1, s);
            std::vector<double> d2 = queue::departures_from_rest(a2, s);
            d1_last[rep] = d1[len - 1];
            d2_last[rep] = d2[len - 1];
            d2_prev[rep] = d2[len - 2];
        });
        double ks1 = stats::ks_statistic(d1_last,
                                         [&](double x) { return stats::exp_cdf(x, a1_rate); });
        double ks2 = stats::ks_statistic(d2_last,
                                         [&](double x) { return stats::exp_cdf(x, a2_rate); });
        double crit = stats::ks_critical(windows, 0.01);
        // past departures of the slow queue vs future departures of the fast one
        double corr = stats::correlation(d2_prev, d1_last);
        t.rows.push_back({"fixedpoint_ks_fast", fmt_i(windows), format_double(ks1),
                          format_double(crit), ks1 < crit ? "pass" : "fail", ""});
        t.rows.push_back({"fixedpoint_ks_slow", fmt_i(windows), format_double(ks2),
                          format_double(crit), ks2 < crit ? "pass" : "fail", ""});
        t.rows.push_back({"fixedpoint_past_future_corr", fmt_i(windows), format_double(corr), "0.01",
                          std::fabs(corr) < 0.01 ? "pass" : "fail", ""});
    }
    if (budget.exceeded()) truncate_note(t);
    return t;
}

Table bound_check_table(const ExperimentConfig& cfg) {
    Table t;
    t.columns = {"beta", "alpha", "m",         "theta", "bound", "bound_raw",
                 "mc_p", "mc_stderr", "pass",  "error"};
    if (!require_grid(t, !cfg.m_list.empty(), "m")) return t;
    Budget budget = Budget::from(cfg);
    const double beta = cfg.lambda;
    const double alpha = cfg.rho;
    for (std::size_t i = 0; i < cfg.m_list.size(); ++i) {
        if (budget.exceeded()) {
            truncate_note(t);
            break;
        }
        const long m = cfg.m_list[i];
        try {
            const double theta = cfg.theta > 0.0 ? cfg.theta : queue::default_theta(beta, m);
            const double raw = queue::empty_queue_bound_raw(beta, alpha, m, theta);
            const double bound = queue::empty_queue_bound(beta, alpha, m, theta);
            const double mc = queue::mc_empty_queue_prob(family_stream(cfg, "bound-check", i), beta,
                                                         alpha, m, cfg.reps);
            const double se = std::sqrt(mc * (1.0 - mc) / cfg.reps);
            const bool ok = mc <= bound + 2.0 * se;
            t.rows.push_back({format_double(beta), format_double(alpha), fmt_i(m),
                              format_double(theta), format_double(bound), format_double(raw),
                              format_double(mc), format_double(se), ok ? "pass" : "fail", ""});
        } catch (const std::exception& e) {
            error_row(t, {format_double(beta), format_double(alpha), fmt_i(m)}, e.what());
        }
    }
    return t;
}

Table simulate_table(const ExperimentConfig& cfg) {
    Table t;
    t.columns = {"family", "n", "param", "reps", "estimate", "stderr", "extra", "error"};
    if (!require_grid(t, !cfg.n_list.empty(), "n")) return t;
    Budget budget = Budget::from(cfg);
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        if (budget.exceeded()) {
            truncate_note(t);
            break;
        }
        const int N = cfg.n_list[i];
        try {
            if (!cfg.rho_given) {
                RngStream rng = family_stream(cfg, "simulate-point", i);
                std::vector<double> g(cfg.reps);
                parallel_replicas(cfg.reps, cfg.jobs, [&](int rep) {
                    g[rep] = last_passage_value(Rect({1, 1}, {N, N}), streamed_rows(rng.substream(rep)));
                });
                const double m = stats::mean(g);
                const double v = stats::variance(g);
                t.rows.push_back({"point_mean_over_n", fmt_i(N), "", fmt_i(cfg.reps),
                                  format_double(m / N), format_double(std::sqrt(v / cfg.reps) / N),
                                  "var=" + format_double(v), ""});
            } else {
                ExitTailResult res = exit_point_tail(family_stream(cfg, "simulate-exit", i),
                                                     Density(cfg.rho), N, cfg.r_list, cfg.reps,
                                                     cfg.jobs);
                for (const TailEstimate& e : res.tails)
                    t.rows.push_back({"exit_tail", fmt_i(N), format_double(e.threshold),
                                      fmt_i(e.reps), format_double(e.p_hat), format_double(e.stderr_),
                                      "", ""});
                t.notes.push_back(fit_note("exit-tail-vs-r target-exponent=-3 n=" + std::to_string(N), res.fit));
            }
        } catch (const std::exception& e) {
            error_row(t, {cfg.rho_given ? "exit_tail" : "point_mean_over_n", fmt_i(N)}, e.what());
        }
    }
    return t;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    if (text.empty()) return out;
    if (text.find(':') != std::string::npos) {
        // geometric range start:stop:count
        double start, stop;
        long count;
        if (std::sscanf(text.c_str(), "%lf:%lf:%ld", &start, &stop, &count) != 3 || count < 1 ||
            start <= 0.0 || stop <= 0.0)
            throw std::invalid_argument("list: geometric range must be start:stop:count with positive endpoints");
        if (count == 1) return {start};
        for (long i = 0; i < count; ++i)
            out.push_back(start * std::pow(stop / start, static_cast<double>(i) / (count - 1)));
        return out;
    }
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("list: bad number '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("list: no values in '" + text + "'");
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_double_list(text)) {
        int i = static_cast<int>(std::llround(v));
        if (out.empty() || out.back() != i) out.push_back(i);
    }
    return out;
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t h = line.find('#');
        if (h != std::string::npos) line = line.substr(0, h);
        const std::size_t eq = line.find('=');
        std::string key, value;
        if (eq != std::string::npos) {
            key = line.substr(0, eq);
            value = line.substr(eq + 1);
        } else {
            key = line;
        }
        auto trim = [](std::string& s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
        };
        trim(key);
        trim(value);
        if (key.empty()) continue;
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) + " has no '='");

        if (key == "experiment") cfg.experiment = value;
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "reps") cfg.reps = std::stoi(value);
        else if (key == "jobs") cfg.jobs = std::stoi(value);
        else if (key == "budget-seconds") cfg.budget_seconds = std::stol(value);
        else if (key == "out") cfg.out_path = value;
        else if (key == "format") cfg.format = value;
        else if (key == "n") cfg.n_list = parse_int_list(value);
        else if (key == "rho") { cfg.rho = std::stod(value); cfg.rho_given = true; }
        else if (key == "lambda") cfg.lambda = std::stod(value);
        else if (key == "xi") {
            std::vector<double> v = parse_double_list(value);
            if (v.size() != 2) throw std::invalid_argument("config: xi needs two components");
            cfg.xi = {v[0], v[1]};
        }
        else if (key == "c") cfg.c_list = parse_double_list(value);
        else if (key == "m") cfg.m_list = parse_int_list(value);
        else if (key == "r") cfg.r_list = parse_double_list(value);
        else if (key == "k") cfg.k_list = parse_int_list(value);
        else if (key == "R") cfg.R_list = parse_double_list(value);
        else if (key == "alpha") cfg.alpha_list = parse_double_list(value);
        else if (key == "a") cfg.a_list = parse_double_list(value);
        else if (key == "l") cfg.l_list = parse_int_list(value);
        else if (key == "theta") cfg.theta = std::stod(value);
        else if (key == "anchor-mult") cfg.anchor_mult = std::stod(value);
        else if (key == "drift") cfg.drift = std::stod(value);
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

std::string resolved_config_line(const ExperimentConfig& cfg) {
    std::string s = "experiment=" + cfg.experiment;
    s += " seed=" + std::to_string(cfg.seed);
    s += " reps=" + std::to_string(cfg.reps);
    s += " jobs=" + std::to_string(cfg.jobs);
    s += " budget-seconds=" + std::to_string(cfg.budget_seconds);
    s += " format=" + cfg.format;
    s += " n=" + join_ints(cfg.n_list);
    s += " rho=" + format_double(cfg.rho);
    s += " lambda=" + format_double(cfg.lambda);
    s += " xi=" + format_double(cfg.xi.d1) + "," + format_double(cfg.xi.d2);
    if (!cfg.c_list.empty()) s += " c=" + join_doubles(cfg.c_list);
    if (!cfg.m_list.empty()) s += " m=" + join_ints(cfg.m_list);
    if (!cfg.r_list.empty()) s += " r=" + join_doubles(cfg.r_list);
    if (!cfg.k_list.empty()) s += " k=" + join_ints(cfg.k_list);
    if (!cfg.R_list.empty()) s += " R=" + join_doubles(cfg.R_list);
    if (!cfg.alpha_list.empty()) s += " alpha=" + join_doubles(cfg.alpha_list);
    if (!cfg.a_list.empty()) s += " a=" + join_doubles(cfg.a_list);
    if (!cfg.l_list.empty()) s += " l=" + join_ints(cfg.l_list);
    if (cfg.theta > 0.0) s += " theta=" + format_double(cfg.theta);
    s += " anchor-mult=" + format_double(cfg.anchor_mult);
    if (cfg.drift > 0.0) s += " drift=" + format_double(cfg.drift);
    return s;
}

void resolve_defaults(ExperimentConfig& cfg) {
    if (cfg.jobs <= 0) cfg.jobs = default_jobs();
    const std::string& e = cfg.experiment;
    auto def_reps = [&](int v) { if (cfg.reps <= 0) cfg.reps = v; };
    if (e == "local-stationarity") {
        if (cfg.n_list.empty()) cfg.n_list = {2000};
        if (cfg.c_list.empty()) cfg.c_list = {0.05, 0.1, 0.2, 0.4};
        def_reps(400);
    } else if (e == "stabilization") {
        if (cfg.n_list.empty()) cfg.n_list = {2000};
        if (cfg.m_list.empty()) cfg.m_list = {4, 8, 16, 32};
        def_reps(400);
    } else if (e == "coalescence") {
        if (cfg.R_list.empty() && cfg.alpha_list.empty()) cfg.R_list = {2, 4, 8, 16};
        if (!cfg.R_list.empty() && cfg.k_list.empty()) cfg.k_list = {8};
        if (!cfg.alpha_list.empty() && cfg.a_list.empty()) cfg.a_list = {1.0};
        if (cfg.n_list.empty()) cfg.n_list = {cfg.R_list.empty() ? 3000 : 4000};
        def_reps(2000);
    } else if (e == "exponents") {
        if (cfg.n_list.empty()) cfg.n_list = {250, 500, 1000, 2000};
        if (cfg.l_list.empty()) cfg.l_list = {50, 100, 200};
        def_reps(2000);
    } else if (e == "queue-check") {
        if (cfg.n_list.empty()) cfg.n_list = {100000};
        def_reps(1);
    } else if (e == "bound-check") {
        if (cfg.m_list.empty()) cfg.m_list = {5, 20, 50};
        if (!cfg.rho_given) cfg.rho = 0.6;
        def_reps(100000);
    } else if (e == "simulate") {
        if (cfg.n_list.empty()) cfg.n_list = {500};
        if (cfg.r_list.empty()) cfg.r_list = {1.0, 1.5, 2.0, 2.5};
        def_reps(1000);
    } else {
        throw std::invalid_argument("experiment: unknown experiment '" + e + "'");
    }
}

Table run(const ExperimentConfig& cfg_in) {
    ExperimentConfig cfg = cfg_in;
    if (cfg.jobs <= 0) cfg.jobs = default_jobs();
    if (cfg.reps <= 0) cfg.reps = 1;
    Table t;
    if (cfg.experiment == "local-stationarity") t = local_stationarity_table(cfg);
    else if (cfg.experiment == "stabilization") t = stabilization_table(cfg);
    else if (cfg.experiment == "coalescence") t = coalescence_table(cfg);
    else if (cfg.experiment == "exponents") t = exponents_table(cfg);
    else if (cfg.experiment == "queue-check") t = queue_check_table(cfg);
    else if (cfg.experiment == "bound-check") t = bound_check_table(cfg);
    else if (cfg.experiment == "simulate") t = simulate_table(cfg);
    else throw std::invalid_argument("experiment: unknown experiment '" + cfg.experiment + "'");
    t.resolved_config = resolved_config_line(cfg);
    return t;
}

VarianceExponentResult variance_exponent(RngStream rng, const std::vector<int>& n_grid, int reps,
                                         int jobs) {
    if (reps < 2) throw std::invalid_argument("variance_exponent: reps must be >= 2");
    VarianceExponentResult res;
    std::vector<double> ns, vars;
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        const int N = n_grid[i];
        if (N < 2) throw std::invalid_argument("variance_exponent: n must be >= 2");
        RngStream row = rng.substream(i);
        std::vector<double> g(reps);
        parallel_replicas(reps, jobs, [&](int rep) {
            g[rep] = last_passage_value(Rect({1, 1}, {N, N}), streamed_rows(row.substream(rep)));
        });
        const double m = stats::mean(g);
        const double v = stats::variance(g);
        res.n_grid.push_back(N);
        res.mean_over_n.push_back(m / N);
        res.se_mean_over_n.push_back(std::sqrt(v / reps) / N);
        res.variance.push_back(v);
        ns.push_back(N);
        vars.push_back(v);
    }
    res.fit = stats::fit_loglog(ns, vars);
    return res;
}

ProfileGaussianityResult profile_gaussianity(RngStream rng, int N, double c, int fields,
                                             double rho) {
    if (N < 16) throw std::invalid_argument("profile_gaussianity: N too small");
    if (!(c > 0.0)) throw std::invalid_argument("profile_gaussianity: c must be > 0");
    if (fields < 1) throw std::invalid_argument("profile_gaussianity: fields must be >= 1");
    Density density(rho);

    const int L = std::max(1, static_cast<int>(std::floor(c * std::pow(2.0 * N, 2.0 / 3.0))));
    const int windows_per_field = std::max(1, std::min(256, N / (2 * L)));
    const int W = N + windows_per_field * L + 1;

    std::vector<double> station_steps;  // per-step profile increments
    std::vector<double> station_sums;   // window partial sums
    std::vector<double> plain_sums;     // same statistic from the unconstrained field

    for (int rep = 0; rep < fields; ++rep) {
        RngStream sub = rng.substream(rep);
        const Rect bulk({0, 0}, {W, N});
        WeightField w = sample_weight_field(sub.substream(0), bulk);
        BoundaryWeights bw = sample_stationary_boundary(sub.substream(1), density, Coord{-1, -1},
                                                        Orientation::Forward, W + 1, N + 1);
        PassageField stat = stationary_passage(w, bw);
        PassageField plain = last_passage(w, {0, 0}, Orientation::Forward);
        // antidiagonal profile through (0, N): point t is (t, N - t)
        auto profile_at = [&](const PassageField& f, int step) { return f.value({step, N - step}); };
        const int total = windows_per_field * L;
        for (int s = 0; s < total; ++s)
            station_steps.push_back(profile_at(stat, s + 1) - profile_at(stat, s));
        for (int k = 0; k < windows_per_field; ++k) {
            station_sums.push_back(profile_at(stat, (k + 1) * L) - profile_at(stat, k * L));
            plain_sums.push_back(profile_at(plain, (k + 1) * L) - profile_at(plain, k * L));
        }
    }

    const double step_mean = 1.0 / (1.0 - rho) - 1.0 / rho;
    const double step_var = 1.0 / ((1.0 - rho) * (1.0 - rho)) + 1.0 / (rho * rho);
    ProfileGaussianityResult out;
    out.window = L;
    out.step_samples = static_cast<long>(station_steps.size());
    out.window_samples = static_cast<long>(station_sums.size());
    out.crit_step = stats::ks_critical(station_steps.size(), 0.01);
    out.ks_step_exact = stats::ks_statistic(
        station_steps, [&](double x) { return stats::exp_difference_cdf(x, 1.0 - rho, rho); });
    out.crit_window = stats::ks_critical(station_sums.size(), 0.01);
    auto window_cdf = [&](double x) {
        return stats::normal_cdf(x, step_mean * L, std::sqrt(step_var * L));
    };
    out.ks_window_normal = stats::ks_statistic(station_sums, window_cdf);
    out.ks_window_unconstrained = stats::ks_statistic(plain_sums, window_cdf);
    out.step_variance = stats::variance(station_steps);
    out.step_variance_target = step_var;
    return out;
}

std::string to_csv(const Table& table) {
    std::string out = "# resolved-config: " + table.resolved_config + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ",";
        out += table.columns[i];
    }
    out += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += row[i];
        }
        out += "\n";
    }
    for (const std::string& n : table.notes) out += "# " + n + "\n";
    return out;
}

std::string to_json(const Table& table) {
    nlohmann::json j;
    j["resolved_config"] = table.resolved_config;
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    j["notes"] = table.notes;
    j["truncated"] = table.truncated;
    return j.dump(2) + "\n";
}

int write_output(const Table& table, const ExperimentConfig& cfg) {
    const std::string body = cfg.format == "json" ? to_json(table) : to_csv(table);
    if (cfg.out_path.empty()) {
        std::fputs(body.c_str(), stdout);
    } else {
        std::ofstream out(cfg.out_path, std::ios::binary);
        if (!out) throw std::invalid_argument("out: cannot open '" + cfg.out_path + "' for writing");
        out << body;
    }
    return table.truncated ? 2 : 0;
}

} // namespace lpplab
