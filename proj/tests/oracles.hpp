#pragma once

// Independent brute-force oracles used by the test suites. These enumerate
// paths directly from the definitions and never touch the DP code paths
// they are checking.

#include <limits>
#include <vector>

#include "lpplab/lpp.hpp"
#include "lpplab/weights.hpp"

namespace oracle {

using lpplab::BoundaryWeights;
using lpplab::Coord;
using lpplab::Rect;
using lpplab::WeightField;

struct BruteResult {
    double value = -std::numeric_limits<double>::infinity();
    std::vector<Coord> path;
};

// Exhaustive maximum over up-right paths from `from` to `to`.
inline void brute_walk(const WeightField& w, Coord at, Coord to, double sum,
                       std::vector<Coord>& cur, BruteResult& best) {
    sum += w.at(at);
    cur.push_back(at);
    if (at == to) {
        if (sum > best.value) {
            best.value = sum;
            best.path = cur;
        }
    } else {
        if (at.x < to.x) brute_walk(w, at + lpplab::e1, to, sum, cur, best);
        if (at.y < to.y) brute_walk(w, at + lpplab::e2, to, sum, cur, best);
    }
    cur.pop_back();
}

inline BruteResult brute_lpp(const WeightField& w, Coord from, Coord to) {
    BruteResult best;
    std::vector<Coord> cur;
    brute_walk(w, from, to, 0.0, cur, best);
    return best;
}

// Weight field restricted to a sub-rect.
inline WeightField slice(const WeightField& w, Rect r) {
    std::vector<double> v(r.cells());
    for (int y = r.lo.y; y <= r.hi.y; ++y)
        for (int x = r.lo.x; x <= r.hi.x; ++x) v[r.index({x, y})] = w.at({x, y});
    return WeightField(r, std::move(v));
}

// Boundary-seeded passage value by direct maximization over the exit point:
// branch k enters the bulk after k boundary steps along e1, branch -l along
// e2. Forward orientation, corner o = bulk.lo - (1,1); target must lie
// strictly inside the bulk quadrant.
inline double brute_stationary(const BoundaryWeights& b, const WeightField& bulk, Coord target,
                               int* best_exit = nullptr) {
    const Coord o = b.corner;
    double best = -std::numeric_limits<double>::infinity();
    int exit = 0;
    double prefix = 0.0;
    for (int k = 1; k <= target.x - o.x; ++k) {
        prefix += b.along_e1[k - 1];
        double v = prefix + brute_lpp(bulk, {o.x + k, o.y + 1}, target).value;
        if (v > best) {
            best = v;
            exit = k;
        }
    }
    prefix = 0.0;
    for (int l = 1; l <= target.y - o.y; ++l) {
        prefix += b.along_e2[l - 1];
        double v = prefix + brute_lpp(bulk, {o.x + 1, o.y + l}, target).value;
        if (v > best) {
            best = v;
            exit = -l;
        }
    }
    if (best_exit) *best_exit = exit;
    return best;
}

} // namespace oracle
