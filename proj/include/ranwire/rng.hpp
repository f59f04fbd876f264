#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ranwire {

// splitmix64 finalizer; used to derive independent sub-stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Named RNG streams. Architecture wiring and weight init draw from disjoint
// sub-streams of the same user seed, so either can be varied independently.
namespace stream {
inline constexpr std::uint64_t kArchEdges = 0x41524348ULL;   // "ARCH"
inline constexpr std::uint64_t kWeightInit = 0x57494e49ULL;  // "WINI"
inline constexpr std::uint64_t kDropPath = 0x44524f50ULL;    // "DROP"
inline constexpr std::uint64_t kData = 0x44415441ULL;        // "DATA"
inline constexpr std::uint64_t kMcInfer = 0x4d434d43ULL;     // "MCMC"
inline constexpr std::uint64_t kShuffle = 0x53485546ULL;     // "SHUF"
}  // namespace stream

// mt19937_64 with explicit output mappings. The raw generator sequence is
// pinned by the standard, and the mappings below avoid the library-defined
// distributions, so identical seeds give identical draws on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller; second value of each pair is cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(theta);
        have_cached_ = true;
        return r * std::cos(theta);
    }

    // Fisher-Yates helper, bias-free enough for desk-scale shuffles.
    std::uint64_t below(std::uint64_t n) { return gen_() % n; }

private:
    std::mt19937_64 gen_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

// Independent stream derived from (seed, tag). Distinct tags give
// decorrelated streams of the same base seed.
inline Rng substream(std::uint64_t seed, std::uint64_t tag) {
    return Rng(mix64(seed ^ mix64(tag)));
}

// Cap on internal worker threads, settable via RANWIRE_THREADS.
int max_threads();

}  // namespace ranwire
