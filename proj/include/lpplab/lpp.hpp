#pragma once

// Last-passage dynamic programming over lattice rectangles.
//
// All sweeps run in "sweep space": index (i,j) counts steps away from the
// sweep origin, which is the SW corner for forward orientation and the NE
// corner for reversed orientation. Reversed fields are the forward kernel
// composed with the index reflection, so there is a single DP to optimize
// and test. One back-pointer bit per cell (1 = optimum came through the
// e1-neighbor) is recorded during the sweep; exact ties resolve to e2.

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lpplab/lattice.hpp"
#include "lpplab/weights.hpp"

namespace lpplab {

enum class Orientation { Forward, Reversed };

struct Geodesic {
    std::vector<Coord> points;  // ordered from the field origin to the target
};

struct ExitPoint {
    int z = 0;  // >0: left the boundary after z e1-steps, <0: after |z| e2-steps
};

// Boundary weight sequences attached to a corner. `along_e1[k-1]` is the
// weight of the k-th edge leaving the corner in the e1 sweep direction
// (+e1 for forward, -e1 for reversed); `along_e2` analogously.
struct BoundaryWeights {
    Coord corner;
    Orientation orientation = Orientation::Forward;
    std::vector<double> along_e1;
    std::vector<double> along_e2;
};

// Per-edge passage increments over a window of a forward field:
// h_e1(x) = G(x+e1) - G(x), h_e2(x) = G(x+e2) - G(x).
// For reversed fields the same container holds h_e1(x) = G(x) - G(x+e1),
// which is the positive (Busemann-like) convention.
class IncrementField {
public:
    IncrementField(Rect window, std::vector<double> h1, std::vector<double> h2)
        : window_(window), h1_(std::move(h1)), h2_(std::move(h2)) {}

    const Rect& window() const { return window_; }
    // valid for x in window with x+e1 in window
    double h_e1(Coord c) const {
        return h1_[static_cast<std::size_t>(c.y - window_.lo.y) * (window_.width() - 1) + (c.x - window_.lo.x)];
    }
    // valid for x in window with x+e2 in window
    double h_e2(Coord c) const {
        return h2_[static_cast<std::size_t>(c.y - window_.lo.y) * window_.width() + (c.x - window_.lo.x)];
    }

private:
    Rect window_;
    std::vector<double> h1_;
    std::vector<double> h2_;
};

class PassageField {
public:
    // Plain field over a weight rect; origin must be the matching corner.
    static PassageField plain(const WeightField& weights, Coord origin, Orientation orient,
                              bool keep_values = true);

    // Plain field with streamed rows (weights not materialized).
    static PassageField plain_streamed(Rect weight_rect, Coord origin, Orientation orient,
                                       const RowSampler& rows, bool keep_values);

    // Boundary-seeded field: G(corner) = 0, axis values are boundary prefix
    // sums, bulk follows the recursion. Bulk cells sit strictly inside the
    // quadrant opened at the corner.
    static PassageField with_boundary(const BoundaryWeights& boundary, const RowSampler& rows,
                                      bool keep_values);

    Orientation orientation() const { return orient_; }
    bool has_boundary() const { return has_boundary_; }
    bool has_values() const { return !values_.empty(); }
    Coord origin() const { return origin_; }

    // Full stored rect (includes the boundary axes when present).
    const Rect& rect() const { return rect_; }
    // Cells governed by the bulk recursion.
    Rect bulk_rect() const;

    double value(Coord c) const;
    double far_value() const { return far_value_; }

    // 1 = the optimum at c came through its e1-side neighbor.
    bool step_from_e1(Coord c) const;

    Geodesic backtrack(Coord target) const;
    ExitPoint exit_point(Coord target) const;  // boundary fields only

    IncrementField increments(Rect window) const;
    BoundaryWeights induced_boundary(Coord v) const;

private:
    PassageField() = default;

    Coord lattice_of(int i, int j) const;
    void sweep_of(Coord c, int& i, int& j) const;
    double value_sweep(int i, int j) const { return values_[static_cast<std::size_t>(j) * stride_ + i]; }

    Rect rect_;
    Coord origin_;
    Orientation orient_ = Orientation::Forward;
    bool has_boundary_ = false;
    int W_ = 0, H_ = 0;  // bulk sweep dimensions
    int stride_ = 0;     // grid row length (W_ for plain, W_+1 for boundary)
    int rows_ = 0;       // grid row count
    std::vector<double> values_;
    BitGrid bits_;
    double far_value_ = 0.0;
};

// Adapts a stored weight field to sweep order for the given origin corner.
RowSampler field_rows(const WeightField& weights, Coord origin, Orientation orient);

// Terminal value only, two rolling rows, no bits.
double last_passage_value(Rect weight_rect, const RowSampler& rows);

// Spec-facing convenience wrappers.
PassageField last_passage(const WeightField& weights, Coord origin, Orientation orient);
Geodesic backtrack_geodesic(const PassageField& field, Coord target);
IncrementField increments(const PassageField& field, Rect window);
BoundaryWeights induced_boundary(const PassageField& field, Coord v);

} // namespace lpplab
