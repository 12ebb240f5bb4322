#pragma once

// Dense rectangular fields of i.i.d. Exp(1) vertex weights. Stored row-major
// (y-major) because the passage-time sweeps stream whole rows.

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "lpplab/lattice.hpp"
#include "lpplab/rng.hpp"

namespace lpplab {

class WeightField {
public:
    WeightField(Rect rect, std::vector<double> values)
        : rect_(rect), values_(std::move(values)) {
        if (values_.size() != rect_.cells())
            throw std::invalid_argument("WeightField: value count does not match rect");
    }

    const Rect& rect() const { return rect_; }
    double at(Coord c) const { return values_[rect_.index(c)]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

private:
    Rect rect_;
    std::vector<double> values_;
};

inline WeightField sample_weight_field(RngStream rng, Rect rect) {
    std::vector<double> v(rect.cells());
    for (double& w : v) w = rng.next_exponential(1.0);
    return WeightField(rect, std::move(v));
}

// Fills one row of bulk weights in sweep order. `row` counts from the sweep
// origin; the callee decides whether values come from a stored field or are
// streamed from an RNG.
using RowSampler = std::function<void(int row, std::span<double> out)>;

// Streams fresh Exp(1) draws, row-major in sweep order.
inline RowSampler streamed_rows(RngStream rng) {
    auto state = std::make_shared<RngStream>(rng);
    return [state](int, std::span<double> out) {
        for (double& w : out) w = state->next_exponential(1.0);
    };
}

} // namespace lpplab
