#include "lpplab/lpp.hpp"

#include <algorithm>
#include <stdexcept>

namespace lpplab {

namespace {

void check(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

} // namespace

Coord PassageField::lattice_of(int i, int j) const {
    if (orient_ == Orientation::Forward) return {origin_.x + i, origin_.y + j};
    return {origin_.x - i, origin_.y - j};
}

void PassageField::sweep_of(Coord c, int& i, int& j) const {
    if (orient_ == Orientation::Forward) {
        i = c.x - origin_.x;
        j = c.y - origin_.y;
    } else {
        i = origin_.x - c.x;
        j = origin_.y - c.y;
    }
}

Rect PassageField::bulk_rect() const {
    if (!has_boundary_) return rect_;
    if (W_ == 0 || H_ == 0) throw std::logic_error("bulk_rect: boundary-only field has no bulk");
    if (orient_ == Orientation::Forward) return Rect(origin_ + Coord{1, 1}, rect_.hi);
    return Rect(rect_.lo, origin_ - Coord{1, 1});
}

double PassageField::value(Coord c) const {
    check(has_values(), "value: field was built without stored values");
    check(rect_.contains(c), "value: coordinate outside field rect");
    int i, j;
    sweep_of(c, i, j);
    return value_sweep(i, j);
}

bool PassageField::step_from_e1(Coord c) const {
    check(rect_.contains(c), "step_from_e1: coordinate outside field rect");
    int i, j;
    sweep_of(c, i, j);
    return bits_.get(i, j);
}

PassageField PassageField::plain_streamed(Rect weight_rect, Coord origin, Orientation orient,
                                          const RowSampler& rows, bool keep_values) {
    if (orient == Orientation::Forward)
        check(origin == weight_rect.lo, "last_passage: forward origin must be the SW corner");
    else
        check(origin == weight_rect.hi, "last_passage: reversed origin must be the NE corner");

    const int W = weight_rect.width();
    const int H = weight_rect.height();

    PassageField f;
    f.rect_ = weight_rect;
    f.origin_ = origin;
    f.orient_ = orient;
    f.has_boundary_ = false;
    f.W_ = W;
    f.H_ = H;
    f.stride_ = W;
    f.rows_ = H;
    f.bits_ = BitGrid(W, H);

    std::vector<double> wbuf(W);
    std::vector<double> cur(W), prev(W);
    if (keep_values) f.values_.resize(static_cast<std::size_t>(W) * H);

    for (int j = 0; j < H; ++j) {
        rows(j, wbuf);
        if (j == 0) {
            cur[0] = wbuf[0];
            for (int i = 1; i < W; ++i) {
                cur[i] = cur[i - 1] + wbuf[i];
                f.bits_.set(i, 0, true);
            }
        } else {
            cur[0] = prev[0] + wbuf[0];
            for (int i = 1; i < W; ++i) {
                const double left = cur[i - 1];
                const double down = prev[i];
                const bool from_e1 = left > down;  // tie -> e2
                cur[i] = wbuf[i] + (from_e1 ? left : down);
                f.bits_.set(i, j, from_e1);
            }
        }
        if (keep_values)
            std::copy(cur.begin(), cur.end(), f.values_.begin() + static_cast<std::size_t>(j) * W);
        std::swap(cur, prev);
    }
    f.far_value_ = prev[W - 1];
    return f;
}

PassageField PassageField::plain(const WeightField& weights, Coord origin, Orientation orient,
                                 bool keep_values) {
    return plain_streamed(weights.rect(), origin, orient, field_rows(weights, origin, orient),
                          keep_values);
}

PassageField PassageField::with_boundary(const BoundaryWeights& boundary, const RowSampler& rows,
                                         bool keep_values) {
    const int W = static_cast<int>(boundary.along_e1.size());
    const int H = static_cast<int>(boundary.along_e2.size());
    for (double v : boundary.along_e1) check(v > 0.0, "with_boundary: boundary weights must be positive");
    for (double v : boundary.along_e2) check(v > 0.0, "with_boundary: boundary weights must be positive");

    PassageField f;
    f.origin_ = boundary.corner;
    f.orient_ = boundary.orientation;
    f.has_boundary_ = true;
    f.W_ = W;
    f.H_ = H;
    f.stride_ = W + 1;
    f.rows_ = H + 1;
    if (f.orient_ == Orientation::Forward)
        f.rect_ = Rect(boundary.corner, boundary.corner + Coord{W, H});
    else
        f.rect_ = Rect(boundary.corner - Coord{W, H}, boundary.corner);
    f.bits_ = BitGrid(W + 1, H + 1);

    std::vector<double> wbuf(std::max(W, 1));
    std::vector<double> cur(W + 1), prev(W + 1);
    if (keep_values) f.values_.resize(static_cast<std::size_t>(W + 1) * (H + 1));

    // axis row: prefix sums of the e1 boundary
    cur[0] = 0.0;
    for (int i = 1; i <= W; ++i) {
        cur[i] = cur[i - 1] + boundary.along_e1[i - 1];
        f.bits_.set(i, 0, true);
    }
    if (keep_values) std::copy(cur.begin(), cur.end(), f.values_.begin());
    std::swap(cur, prev);

    for (int j = 1; j <= H; ++j) {
        cur[0] = prev[0] + boundary.along_e2[j - 1];
        if (W > 0) {
            rows(j - 1, std::span<double>(wbuf.data(), W));
            for (int i = 1; i <= W; ++i) {
                const double left = cur[i - 1];
                const double down = prev[i];
                const bool from_e1 = left > down;  // tie -> e2
                cur[i] = wbuf[i - 1] + (from_e1 ? left : down);
                f.bits_.set(i, j, from_e1);
            }
        }
        if (keep_values)
            std::copy(cur.begin(), cur.end(),
                      f.values_.begin() + static_cast<std::size_t>(j) * (W + 1));
        std::swap(cur, prev);
    }
    f.far_value_ = prev[W];
    return f;
}

Geodesic PassageField::backtrack(Coord target) const {
    if (!rect_.contains(target))
        throw std::out_of_range("backtrack_geodesic: target outside field rect");
    int i, j;
    sweep_of(target, i, j);
    if (i < 0 || j < 0) throw std::out_of_range("backtrack_geodesic: target on the wrong side of the origin");

    Geodesic g;
    g.points.reserve(static_cast<std::size_t>(i) + j + 1);
    while (true) {
        g.points.push_back(lattice_of(i, j));
        if (i == 0 && j == 0) break;
        if (j == 0) --i;
        else if (i == 0) --j;
        else if (bits_.get(i, j)) --i;
        else --j;
    }
    std::reverse(g.points.begin(), g.points.end());
    return g;
}

ExitPoint PassageField::exit_point(Coord target) const {
    check(has_boundary_, "exit_point: field has no boundary");
    int i, j;
    sweep_of(target, i, j);
    check(i >= 1 && j >= 1 && i <= W_ && j <= H_,
          "exit_point: target must lie strictly inside the bulk quadrant");
    while (i > 0 && j > 0) {
        if (bits_.get(i, j)) --i;
        else --j;
    }
    if (j == 0) return {i};
    return {-j};
}

IncrementField PassageField::increments(Rect window) const {
    check(has_values(), "increments: field was built without stored values");
    const Rect domain = has_boundary_ ? bulk_rect() : rect_;
    if (!domain.contains(window)) throw std::out_of_range("increments: window exceeds field");

    const int w = window.width();
    const int h = window.height();
    std::vector<double> h1(std::max(0, (w - 1)) * static_cast<std::size_t>(h));
    std::vector<double> h2(static_cast<std::size_t>(w) * std::max(0, (h - 1)));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            Coord c{window.lo.x + x, window.lo.y + y};
            if (x + 1 < w) {
                double d = value(c + e1) - value(c);
                h1[static_cast<std::size_t>(y) * (w - 1) + x] =
                    orient_ == Orientation::Forward ? d : -d;
            }
            if (y + 1 < h) {
                double d = value(c + e2) - value(c);
                h2[static_cast<std::size_t>(y) * w + x] =
                    orient_ == Orientation::Forward ? d : -d;
            }
        }
    }
    return IncrementField(window, std::move(h1), std::move(h2));
}

BoundaryWeights PassageField::induced_boundary(Coord v) const {
    check(has_values(), "induced_boundary: field was built without stored values");
    check(rect_.contains(v), "induced_boundary: point outside field rect");
    check(v.x > rect_.lo.x && v.x < rect_.hi.x && v.y > rect_.lo.y && v.y < rect_.hi.y,
          "induced_boundary: point must be interior to the field rect");

    BoundaryWeights b;
    b.corner = v;
    b.orientation = orient_;
    if (orient_ == Orientation::Forward) {
        b.along_e1.reserve(rect_.hi.x - v.x);
        for (int k = 1; k <= rect_.hi.x - v.x; ++k)
            b.along_e1.push_back(value({v.x + k, v.y}) - value({v.x + k - 1, v.y}));
        b.along_e2.reserve(rect_.hi.y - v.y);
        for (int k = 1; k <= rect_.hi.y - v.y; ++k)
            b.along_e2.push_back(value({v.x, v.y + k}) - value({v.x, v.y + k - 1}));
    } else {
        b.along_e1.reserve(v.x - rect_.lo.x);
        for (int k = 1; k <= v.x - rect_.lo.x; ++k)
            b.along_e1.push_back(value({v.x - k, v.y}) - value({v.x - k + 1, v.y}));
        b.along_e2.reserve(v.y - rect_.lo.y);
        for (int k = 1; k <= v.y - rect_.lo.y; ++k)
            b.along_e2.push_back(value({v.x, v.y - k}) - value({v.x, v.y - k + 1}));
    }
    return b;
}

RowSampler field_rows(const WeightField& weights, Coord origin, Orientation orient) {
    const Rect r = weights.rect();
    if (orient == Orientation::Forward) {
        check(origin == r.lo, "field_rows: forward origin must be the SW corner of the weights");
        return [&weights, r](int row, std::span<double> out) {
            const int y = r.lo.y + row;
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] = weights.at({r.lo.x + static_cast<int>(i), y});
        };
    }
    check(origin == r.hi, "field_rows: reversed origin must be the NE corner of the weights");
    return [&weights, r](int row, std::span<double> out) {
        const int y = r.hi.y - row;
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = weights.at({r.hi.x - static_cast<int>(i), y});
    };
}

double last_passage_value(Rect weight_rect, const RowSampler& rows) {
    const int W = weight_rect.width();
    const int H = weight_rect.height();
    std::vector<double> wbuf(W), g(W);
    for (int j = 0; j < H; ++j) {
        rows(j, wbuf);
        if (j == 0) {
            g[0] = wbuf[0];
            for (int i = 1; i < W; ++i) g[i] = g[i - 1] + wbuf[i];
        } else {
            g[0] += wbuf[0];
            for (int i = 1; i < W; ++i) g[i] = wbuf[i] + std::max(g[i - 1], g[i]);
        }
    }
    return g[W - 1];
}

PassageField last_passage(const WeightField& weights, Coord origin, Orientation orient) {
    return PassageField::plain(weights, origin, orient, true);
}

Geodesic backtrack_geodesic(const PassageField& field, Coord target) {
    return field.backtrack(target);
}

IncrementField increments(const PassageField& field, Rect window) {
    return field.increments(window);
}

BoundaryWeights induced_boundary(const PassageField& field, Coord v) {
    return field.induced_boundary(v);
}

} // namespace lpplab
