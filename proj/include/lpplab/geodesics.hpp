#pragma once

// Geodesic forests (one back-pointer per cell toward a common endpoint),
// coalescence points, stabilization against a stationary surrogate for the
// infinite-geodesic tree, and transversal fluctuation measurement.

#include <memory>

#include "lpplab/stationary.hpp"
#include "lpplab/stats.hpp"

namespace lpplab {

struct CoalescencePoint {
    Coord p;
};

class GeodesicForest {
public:
    // Field bits encode, for every cell, the first step of the geodesic
    // toward the field origin. Sources must lie inside the field.
    GeodesicForest(std::shared_ptr<const PassageField> field, Rect sources);

    Coord target() const { return field_->origin(); }
    const Rect& sources() const { return sources_; }
    const PassageField& field() const { return *field_; }

    // Next point on the geodesic from c toward the target.
    Coord next_step(Coord c) const;

    // Full geodesic from a source to the target.
    Geodesic path_from(Coord source) const;

    // Earliest common point of the two geodesics.
    CoalescencePoint coalescence_point(Coord q1, Coord q2) const;

private:
    std::shared_ptr<const PassageField> field_;
    Rect sources_;
};

GeodesicForest build_forest(std::shared_ptr<const PassageField> field, Rect sources);

struct TailEstimate {
    double threshold = 0.0;
    long count = 0;
    int reps = 0;
    double p_hat = 0.0;
    double stderr_ = 0.0;
    stats::Interval ci;
};

struct StabilizationResult {
    int scale = 0;           // N
    double anchor_mult = 0;  // K
    std::vector<int> box_sizes;
    std::vector<TailEstimate> disagreement;  // P(forests differ on the M-box)
    stats::SlopeFit fit;                     // log disagreement vs log M
};

// Frequency that the point-to-point forest into N*xi and the forest of a
// reversed stationary field anchored at K*N*xi differ on each M-box. Both
// forests share the bulk weights on [0, N*xi].
StabilizationResult stabilization_check(RngStream rng, Direction xi, int N,
                                        std::vector<int> box_sizes, int reps,
                                        double anchor_mult = 4.0, int jobs = 1);

struct CoalescenceTailResult {
    int k = 0;
    int scale = 0;
    std::vector<TailEstimate> tails;  // P(|p_c| > R k) per R
    stats::SlopeFit fit;              // log tail vs log R
    double median_distance = 0.0;     // median |p_c|
};

// Geodesics from (0,0) and (0, ceil(k^(2/3))) to N*xi; tail of the l1 norm
// of the coalescence point over the R grid.
CoalescenceTailResult coalescence_tail(RngStream rng, int k, std::vector<double> R_grid, int N,
                                       int reps, Direction xi = {0.5, 0.5}, int jobs = 1);

struct MacroCoalescenceResult {
    double a = 0.0;
    int scale = 0;
    std::vector<TailEstimate> near_target;  // P(|o - p_c| <= alpha N)
    std::vector<TailEstimate> near_source;  // P(|q2 - p_c| <= alpha N)
    stats::SlopeFit fit_near_target;
    stats::SlopeFit fit_near_source;
};

// Sources (0,0) and (0, floor(a N^(2/3))), target o = N*xi; probabilities
// that the coalescence point falls within alpha*N of the target or of the
// second source, over the alpha grid.
MacroCoalescenceResult macro_coalescence(RngStream rng, double a, std::vector<double> alpha_grid,
                                         Direction xi, int N, int reps, int jobs = 1);

struct TransversalQuantiles {
    int l = 0;
    double median = 0.0;
    double q75 = 0.0;
};

struct TransversalResult {
    int scale = 0;
    std::vector<TransversalQuantiles> quantiles;  // scaled deviation per l
    std::vector<TailEstimate> tail;               // P(dev > r) at the largest l
    stats::SlopeFit tail_fit;
};

// Deviation of the geodesic from (0,0) to N*xi at path index 2l from (l,l),
// scaled by l^(2/3). Quantiles should collapse across l; the tail in r has
// a cubic decay target.
TransversalResult transversal_fluctuation(RngStream rng, std::vector<int> l_grid, int N, int reps,
                                          std::vector<double> r_grid = {1.5, 2.0, 3.0, 4.0},
                                          Direction xi = {0.5, 0.5}, int jobs = 1);

// Exit-point tail of a reversed stationary field: P(|Z| > r N^(2/3)) for the
// geodesic from N*xi to the origin, over the r grid.
struct ExitTailResult {
    int scale = 0;
    double rho = 0.0;
    std::vector<TailEstimate> tails;
    stats::SlopeFit fit;
};

ExitTailResult exit_point_tail(RngStream rng, Density rho, int N, std::vector<double> r_grid,
                               int reps, int jobs = 1);

TailEstimate make_tail_estimate(double threshold, long count, int reps);

} // namespace lpplab
