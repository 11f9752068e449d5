#ifndef ORDSTAT_RNG_HPP
#define ORDSTAT_RNG_HPP

#include <cstdint>
#include <random>

namespace ordstat {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seedable stream RNG built on std::mt19937_64, whose output sequence is
// pinned by the C++ standard and therefore reproducible across platforms.
//
// Stream splitting: stream k of base seed s is mt19937_64 seeded with
// splitmix64(s + (k+1) * 0x9E3779B97F4A7C15).  Parallel workers draw from
// disjoint streams, so results do not depend on the thread count.
class StreamRng {
public:
    explicit StreamRng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    static StreamRng stream(std::uint64_t seed, std::uint64_t k) {
        return StreamRng(seed + (k + 1) * 0x9E3779B97F4A7C15ULL);
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on the open interval (0,1): 53-bit mantissa, offset by half an
    // ulp so 0 and 1 are unreachable (safe as a quantile-function argument).
    double uniform01() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace ordstat

#endif
