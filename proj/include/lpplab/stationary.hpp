#pragma once

// Stationary last-passage boundary processes: density-rho boundary weights
// (Exp(1-rho) along e1, Exp(rho) along e2), characteristic directions and
// exit points, in both forward (SW corner) and reversed (NE corner)
// orientations.

#include <utility>

#include "lpplab/lpp.hpp"
#include "lpplab/rng.hpp"
#include "lpplab/weights.hpp"

namespace lpplab {

struct Density {
    explicit Density(double r) : rho(r) {
        if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("Density: rho must lie in (0,1)");
    }
    double rho;
};

struct Direction {
    double d1 = 0.5;
    double d2 = 0.5;
};

// xi(rho) = ((1-rho)^2, rho^2) / ((1-rho)^2 + rho^2)
Direction characteristic_direction(Density rho);

// unique rho with xi(rho) proportional to the given interior direction
Density density_for_direction(Direction xi);

BoundaryWeights sample_stationary_boundary(RngStream rng, Density rho, Coord corner,
                                           Orientation orient, int len_e1, int len_e2);

// Boundary-seeded field over an explicit bulk weight field. The boundary
// corner must sit one step diagonally outside the bulk rect.
PassageField stationary_passage(const WeightField& bulk, const BoundaryWeights& boundary,
                                bool keep_values = true);

// Same, with streamed bulk rows.
PassageField stationary_passage_streamed(const BoundaryWeights& boundary, const RowSampler& rows,
                                         bool keep_values = true);

ExitPoint exit_point(const PassageField& field, Coord target);

} // namespace lpplab
