#pragma once

// Finite-size surrogates for Busemann increment machinery: two reversed
// stationary fields at densities rho -/+ drift, sharing one bulk weight
// field, with their boundary sequences coupled through the stationary queue
// measure. The coupling reuses service draws as departures wherever the
// queue never idles, so boundary agreement is bit-exact where it holds.

#include <optional>

#include "lpplab/stationary.hpp"
#include "lpplab/stats.hpp"

namespace lpplab {

struct CoupledPair {
    Density rho_lo;       // rho - r N^{-1/3}
    Density rho_hi;       // rho + r N^{-1/3}
    double drift_scale;   // r
    int scale;            // N
    Direction direction;  // xi
    Rect box;             // bulk box [0, N xi]
    BoundaryWeights boundary_lo;
    BoundaryWeights boundary_hi;
    PassageField field_lo;
    PassageField field_hi;
};

// Drift used when none is given: r = (xi1 * M)^(-1/8) * N^(1/12).
double default_drift(Direction xi, int M, int N);

// Builds the coupled pair over the given bulk weights (rect [0, N xi]).
// e1-edge pairs are (departures, services) of a queue with arrival rate
// 1-rho_hi and service rate 1-rho_lo; e2-edge pairs come from the mirror
// queue with rates (rho_lo, rho_hi). r = 0 collapses both fields onto one.
CoupledPair build_coupled_pair(const WeightField& bulk, RngStream boundary_rng, Direction xi,
                               int N, double r, bool keep_values = true);

// Convenience: samples the shared bulk itself from the stream.
CoupledPair build_coupled_pair(RngStream rng, Direction xi, int N, double r,
                               bool keep_values = true);

// Exit sides split as required for stabilization: the low-density geodesic
// to the upper-left corner of the M-box leaves through the e2 boundary and
// the high-density geodesic to the lower-right corner through the e1
// boundary. Geodesic order reduces the sup/inf over the box to these
// corners.
bool exit_split_event(const CoupledPair& pair, int M);

// Entrywise agreement of the two induced boundaries at the NE corner of
// the M-box, to reassociation tolerance (disagreements are order one).
bool boundary_agreement_event(const CoupledPair& pair, int M,
                              std::optional<long>* first_disagreement = nullptr);

struct AgreementReport {
    bool exit_split = false;
    bool boundary_agree = false;
    bool stabilized = false;
    std::optional<long> first_disagreement;
};

AgreementReport agreement_report(const CoupledPair& pair, int M);

struct LocalAgreementResult {
    int scale = 0;
    int box_size = 0;      // M
    double drift = 0.0;    // r used
    int reps = 0;
    int failures = 0;
    double failure_rate = 0.0;
    double stderr_ = 0.0;
    stats::Interval ci;
};

// Replicated estimate of the coupling failure probability at window
// coefficient c: per replica checks stabilization of the coupled pair with
// M = c N^(2/3). The failure rate upper-bounds the total-variation distance
// realized by this coupling.
LocalAgreementResult local_agreement(RngStream rng, int N, double c, int reps,
                                     Direction xi = {0.5, 0.5}, double drift_override = 0.0,
                                     double c_max = 0.5, int jobs = 1);

} // namespace lpplab
