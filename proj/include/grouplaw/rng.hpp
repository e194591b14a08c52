#pragma once

#include <cstdint>
#include <initializer_list>

namespace grouplaw {

// Counter-based random streams. A stream is keyed by (seed, purpose tag,
// trial index, variable index, ...) so that every trial draws from its own
// deterministic sequence regardless of execution order or thread count.

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

class RngStream {
public:
    explicit RngStream(std::uint64_t key) : state_(key) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased uniform draw from [0, bound) via rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound) - 1;
        for (;;) {
            std::uint64_t v = next();
            if (v <= limit) return v % bound;
        }
    }

    double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    bool coin() { return (next() & 1) != 0; }

    std::int64_t in_range(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

private:
    std::uint64_t state_;
};

// Derive a stream key from components. Successive components are folded with
// a mixing round each so that (1,2) and (12,<nothing>) collide only by luck.
inline RngStream derive_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t key = detail::mix64(seed ^ 0x67726f75706c6177ULL);
    for (std::uint64_t c : path) key = detail::mix64(key ^ detail::mix64(c ^ 0xa5a5a5a5a5a5a5a5ULL));
    return RngStream(key);
}

// Common purpose tags for stream derivation.
enum class StreamTag : std::uint64_t {
    Estimate = 1,
    Curve = 2,
    Goodness = 3,
    Intersection = 4,
    Occupation = 5,
    BallSample = 6,
    Sparse = 7,
    Fuzz = 8,
};

inline std::uint64_t tag(StreamTag t) { return static_cast<std::uint64_t>(t); }

}  // namespace grouplaw
