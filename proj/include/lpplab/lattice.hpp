#pragma once

// Lattice coordinates, rectangles and packed per-cell direction bits.
// Inequalities between coordinates are coordinatewise.

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace lpplab {

struct Coord {
    int x = 0;
    int y = 0;

    friend bool operator==(Coord a, Coord b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(Coord a, Coord b) { return !(a == b); }
    friend Coord operator+(Coord a, Coord b) { return {a.x + b.x, a.y + b.y}; }
    friend Coord operator-(Coord a, Coord b) { return {a.x - b.x, a.y - b.y}; }
};

inline constexpr Coord e1{1, 0};
inline constexpr Coord e2{0, 1};

// a <= b coordinatewise
inline bool leq(Coord a, Coord b) { return a.x <= b.x && a.y <= b.y; }

// l1 norm |x| = |x1| + |x2|
inline long l1_norm(Coord a) { return std::labs(static_cast<long>(a.x)) + std::labs(static_cast<long>(a.y)); }

// "down-right" partial order: a before b when b is below and to the right
inline bool down_right_leq(Coord a, Coord b) { return a.x <= b.x && a.y >= b.y; }

struct Rect {
    Coord lo;
    Coord hi;

    Rect() = default;
    Rect(Coord lo_, Coord hi_) : lo(lo_), hi(hi_) {
        if (!leq(lo, hi)) throw std::invalid_argument("Rect: lo must be <= hi coordinatewise");
    }

    int width() const { return hi.x - lo.x + 1; }
    int height() const { return hi.y - lo.y + 1; }
    std::size_t cells() const { return static_cast<std::size_t>(width()) * height(); }
    bool contains(Coord c) const { return leq(lo, c) && leq(c, hi); }
    bool contains(const Rect& r) const { return leq(lo, r.lo) && leq(r.hi, hi); }

    // row-major index, rows are y-levels
    std::size_t index(Coord c) const {
        return static_cast<std::size_t>(c.y - lo.y) * width() + (c.x - lo.x);
    }

    friend bool operator==(const Rect& a, const Rect& b) { return a.lo == b.lo && a.hi == b.hi; }
};

// One bit per cell over a (width x height) grid, row-major.
class BitGrid {
public:
    BitGrid() = default;
    BitGrid(int width, int height)
        : width_(width), height_(height),
          words_((static_cast<std::size_t>(width) * height + 63) / 64, 0ULL) {
        if (width <= 0 || height <= 0) throw std::invalid_argument("BitGrid: empty grid");
    }

    int width() const { return width_; }
    int height() const { return height_; }

    void set(int ix, int iy, bool v) {
        std::size_t b = static_cast<std::size_t>(iy) * width_ + ix;
        std::uint64_t mask = 1ULL << (b & 63);
        if (v) words_[b >> 6] |= mask;
        else words_[b >> 6] &= ~mask;
    }

    bool get(int ix, int iy) const {
        std::size_t b = static_cast<std::size_t>(iy) * width_ + ix;
        return (words_[b >> 6] >> (b & 63)) & 1ULL;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace lpplab
