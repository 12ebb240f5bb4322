#pragma once

// Single-server queue windows with exact stationary initialization.
//
// A window covers customers 1..n: interarrival[j-1] is the gap in front of
// customer j and service[j-1] is customer j's service time. The state
// carried in from the infinite past is the pair (wait0, service0) of
// customer 0; with wait0 drawn from the stationary law and service0 a fresh
// Exp(rho) draw this summarizes the bi-infinite construction exactly, so
// finite windows have no truncation error. The Lindley recursion is
//   w_j = (w_{j-1} + s_{j-1} - a_j)^+,   e_j = (w_{j-1} + s_{j-1} - a_j)^-,
// with departures d_j = e_j + s_j, sojourns t_j = w_j + s_j and dual
// services a_j ^ t_{j-1}.

#include <span>
#include <vector>

#include "lpplab/rng.hpp"

namespace lpplab::queue {

struct QueueWindow {
    std::vector<double> interarrival;  // a_1..a_n
    std::vector<double> service;       // s_1..s_n
    double service0 = 0.0;             // s_0
    double wait0 = 0.0;                // w_0
};

struct QueueOutputs {
    std::vector<double> wait;          // w_1..w_n
    std::vector<double> idle;          // e_1..e_n
    std::vector<double> departure;     // d_1..d_n
    std::vector<double> sojourn;       // t_1..t_n
    std::vector<double> dual_service;  // a_j ^ t_{j-1}
};

QueueOutputs lindley_evolve(const QueueWindow& win);

// Stationary waiting time: atom (1 - lambda/rho) at zero, else Exp(rho-lambda).
double sample_stationary_wait(RngStream& rng, double lambda, double rho);

// CDF of the stationary waiting law, and its left limit (for KS with atoms).
double stationary_wait_cdf(double w, double lambda, double rho);
double stationary_wait_cdf_left(double w, double lambda, double rho);

// Window with a iid Exp(lambda), s and s0 iid Exp(rho), w0 stationary.
QueueWindow sample_stationary_window(RngStream& rng, double lambda, double rho, int n);

// One draw from the stationary coupling measure: the (departure, service)
// pair sequence of a stationary window. Marginally departures are iid
// Exp(lambda).
struct NuSample {
    std::vector<double> departure;
    std::vector<double> service;
};
NuSample sample_nu(RngStream& rng, double lambda, double rho, int n);

// Closed form for sum_{i=k}^{l} e_i (1-based, k <= l <= n).
double cumulative_idle(const QueueWindow& win, int k, int l);

// Analytic upper bound for P(sum_{i=1}^m e_i > 0) under the stationary
// window with arrival rate beta < service rate alpha; theta in (0, beta)
// is the Chernoff parameter. The raw value can exceed 1 away from heavy
// traffic; empty_queue_bound clamps it to a usable probability bound.
double empty_queue_bound_raw(double beta, double alpha, long m, double theta);
double empty_queue_bound(double beta, double alpha, long m, double theta);

// Chernoff parameter used by the experiment drivers: 1/sqrt(window length),
// clamped below beta.
double default_theta(double beta, long m);

// Monte Carlo estimate of P(sum_{i=1}^m e_i > 0) under the stationary window.
double mc_empty_queue_prob(RngStream rng, double beta, double alpha, long m, int reps);

// Finite-window queueing operators started from an empty queue
// (w0 = 0, s0 = 0). Used for operator-identity checks after a burn-in.
std::vector<double> departures_from_rest(std::span<const double> a, std::span<const double> s);
std::vector<double> dual_services_from_rest(std::span<const double> a, std::span<const double> s);

// Checks D(D(b,a),s) == D(D(b,R(a,s)),D(a,s)) on the suffix after `burn`
// entries. Requires empirically stable rate ordering (mean b > mean a >
// mean s). Returns the max suffix deviation through *max_diff if given.
bool interchange_check(std::span<const double> b, std::span<const double> a,
                       std::span<const double> s, int burn, double tol,
                       double* max_diff = nullptr);

} // namespace lpplab::queue
