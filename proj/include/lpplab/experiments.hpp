#pragma once

// Experiment orchestration: resolved configurations, replica fan-out,
// estimate tables with slope-fit summaries, and deterministic CSV/JSON
// emission. Every table is a pure function of (config, seed); wall time is
// reported on stdout only so that output files stay byte-reproducible.

#include <cstdint>
#include <string>
#include <vector>

#include "lpplab/stationary.hpp"
#include "lpplab/stats.hpp"

namespace lpplab {

struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = 1;
    int reps = 0;              // 0 = family default
    int jobs = 0;              // 0 = hardware concurrency
    long budget_seconds = 0;   // 0 = unlimited
    std::string out_path;      // empty = stdout
    std::string format = "csv";

    std::vector<int> n_list;
    double rho = 0.5;
    double lambda = 0.4;
    bool rho_given = false;  // simulate: stationary mode when --rho was passed
    Direction xi{0.5, 0.5};
    std::vector<double> c_list;
    std::vector<int> m_list;
    std::vector<double> r_list;
    std::vector<int> k_list;
    std::vector<double> R_list;
    std::vector<double> alpha_list;
    std::vector<double> a_list;
    std::vector<int> l_list;
    double theta = 0.0;  // 0 = 1/sqrt(window) default
    double anchor_mult = 4.0;
    double drift = 0.0;  // 0 = optimized default
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;  // trailing comment lines
    std::string resolved_config;
    bool truncated = false;
};

// List parsing: "a,b,c" or geometric "start:stop:count".
std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

// Flat key=value config file; unknown keys are an error naming the key.
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

std::string resolved_config_line(const ExperimentConfig& cfg);

// Fills family defaults (reps, grids) for the configured experiment. The
// CLI applies this before run(); run() itself takes the grids verbatim, so
// an empty grid yields an empty table.
void resolve_defaults(ExperimentConfig& cfg);

// Runs the configured experiment. Throws std::invalid_argument on config
// errors; infeasible grid cells become per-row error entries instead.
Table run(const ExperimentConfig& cfg);

struct VarianceExponentResult {
    std::vector<int> n_grid;
    std::vector<double> mean_over_n;
    std::vector<double> se_mean_over_n;
    std::vector<double> variance;
    stats::SlopeFit fit;  // log variance vs log n
};

// Passage times from (1,1) to (n,n): growth rate (target 4) and the
// fluctuation-variance exponent (target 2/3).
VarianceExponentResult variance_exponent(RngStream rng, const std::vector<int>& n_grid, int reps,
                                         int jobs = 1);

struct ProfileGaussianityResult {
    int window = 0;  // lattice window length
    long step_samples = 0;
    long window_samples = 0;
    double ks_step_exact = 0.0;  // per-step profile increments vs the exact difference law
    double crit_step = 0.0;
    double ks_window_normal = 0.0;  // stationary window sums vs the matching normal
    double crit_window = 0.0;
    double ks_window_unconstrained = 0.0;  // same statistic from the plain field (reported)
    double step_variance = 0.0;
    double step_variance_target = 0.0;
};

// Antidiagonal profile increments of a stationary field: exact per-step law,
// Gaussianity of window sums at window length c*(2N)^(2/3), and the same
// window statistic computed from an unconstrained field for comparison.
ProfileGaussianityResult profile_gaussianity(RngStream rng, int N, double c, int fields,
                                             double rho = 0.5);

// Serialized forms (identical bytes for identical tables).
std::string to_csv(const Table& table);
std::string to_json(const Table& table);

// Writes per cfg.format/out_path. Returns 0, or 2 when the table was
// truncated by the wall-time budget.
int write_output(const Table& table, const ExperimentConfig& cfg);

std::string format_double(double v);  // 17 significant digits

} // namespace lpplab
