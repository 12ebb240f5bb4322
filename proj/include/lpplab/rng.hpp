#pragma once

// Counter-based splittable random stream. Every replica of every experiment
// owns its own (seed, stream_id) pair, so parallel replicas never share
// mutable state and any draw sequence can be replayed by copying the stream.

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace lpplab {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

// Exponential transform for a uniform u in (0,1).
inline double exp_from_uniform(double u, double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exp_from_uniform: rate must be > 0");
    return -std::log(u) / rate;
}

class RngStream {
public:
    RngStream() : RngStream(0, 0) {}

    RngStream(std::uint64_t seed, std::uint64_t stream_id) {
        state_ = detail::mix64(seed + 0x9e3779b97f4a7c15ULL) ^
                 detail::mix64(stream_id * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL);
        // per-stream odd increment, SplitMix-style split
        gamma_ = detail::mix64(detail::mix64(stream_id) + seed) | 1ULL;
    }

    std::uint64_t next_u64() {
        state_ += gamma_;
        return detail::mix64(state_);
    }

    // Uniform on the open interval (0,1); both endpoints excluded so that
    // -log(u) is always finite and positive.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_exponential(double rate) {
        return exp_from_uniform(next_uniform(), rate);
    }

    // Stationary M/M/1 waiting time: atom of mass 1-lambda/rho at zero,
    // otherwise Exp(rho-lambda).
    double next_stationary_wait(double lambda, double rho) {
        if (!(lambda > 0.0 && lambda < rho && rho < 1.0))
            throw std::invalid_argument("next_stationary_wait: need 0 < lambda < rho < 1");
        double u = next_uniform();
        if (u < 1.0 - lambda / rho) return 0.0;
        return next_exponential(rho - lambda);
    }

    RngStream substream(std::uint64_t child) const {
        RngStream s;
        s.state_ = detail::mix64(state_ ^ detail::mix64(child + 0x165667b19e3779f9ULL));
        s.gamma_ = detail::mix64(gamma_ + child) | 1ULL;
        return s;
    }

private:
    std::uint64_t state_;
    std::uint64_t gamma_;
};

} // namespace lpplab
