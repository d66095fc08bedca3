#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace dmsens {

/// SplitMix64 mixing function (Steele, Lea & Flood; the finalizer is the
/// Stafford "variant 13" of the MurmurHash3 avalanche step).
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

/// Counter-based SplitMix64 stream. The i-th output is a pure function of
/// (state0, i), so independent streams derived from (seed, stream_id) give
/// reproducible draws no matter how work is scheduled across threads.
class Rng {
public:
    explicit Rng(std::uint64_t state0 = 0) : state_(state0) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return splitmix64_mix(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform integer in [0, n). Multiply-shift mapping; the O(n/2^64) bias
    /// is irrelevant at the sample sizes used here.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Standard normal via Box-Muller (no rejection, so the draw count per
    /// call is fixed and streams stay aligned).
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = next_double();
        } while (u1 <= 0.0);
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Derive the initial state of substream `stream` of `seed`. Substreams of
/// distinct (seed, stream) pairs are statistically independent SplitMix64
/// streams; this is how replicates, permutations and bootstrap resamples get
/// their own generators.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64_mix(splitmix64_mix(seed) ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
    return Rng(derive_stream(seed, stream));
}

/// Fisher-Yates permutation of {0,..,n-1}, deterministic per rng state.
inline std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

}  // namespace dmsens
