#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace edgecache {

// All randomness in the simulator flows through Rng. Distribution transforms
// are written out explicitly on top of the mt19937_64 word stream so that a
// seeded run produces the same draws on every platform and so that oracle
// tests can replay a stream exactly.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Unbiased integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_int: n must be > 0");
        const std::uint64_t rem = std::numeric_limits<std::uint64_t>::max() % n;
        if (rem + 1 == n) return engine_() % n;  // 2^64 divisible by n
        const std::uint64_t bound = std::numeric_limits<std::uint64_t>::max() - rem;
        std::uint64_t v = engine_();
        while (v >= bound) v = engine_();
        return v % n;
    }

    /// Exponential with the given mean (inverse CDF; one uniform per draw).
    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

    std::string save_state() const {
        std::ostringstream os;
        os << engine_;
        return os.str();
    }

    void load_state(const std::string& text) {
        std::istringstream is(text);
        is >> engine_;
        if (is.fail()) throw std::invalid_argument("Rng::load_state: malformed state string");
    }

    bool operator==(const Rng& other) const { return engine_ == other.engine_; }

private:
    std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_tag(std::string_view tag) {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Derives an independent stream seed from a master seed, a stream tag and an
/// optional index. Parallel runs get their own streams this way.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t index = 0) {
    std::uint64_t state = base ^ hash_tag(tag) ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    std::uint64_t a = splitmix64(state);
    std::uint64_t b = splitmix64(state);
    return a ^ (b >> 1);
}

}  // namespace edgecache
