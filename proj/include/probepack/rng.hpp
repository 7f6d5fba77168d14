#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace probepack {

// FNV-1a, used for stable stream derivation and content fingerprints.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic generator with explicit algorithms everywhere; the standard
// distributions are implementation-defined and would break run-to-run
// reproducibility across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // Warm up so nearby seeds do not share early outputs.
        splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0); }

    // Uniform integer in [lo, hi], inclusive. Rejection-free modulo is fine here:
    // ranges are tiny compared to 2^64 so the bias is far below what any test sees.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        return lo + next_u64() % (hi - lo + 1);
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform_int(0, n - 1)); }

    bool chance(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[index(i)]);
        }
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[index(v.size())];
    }

private:
    std::uint64_t state_;
};

// Child stream that is stable under reordering of sibling streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view salt) {
    return splitmix64(seed ^= fnv1a64(salt));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view salt, std::uint64_t n) {
    std::uint64_t s = seed ^ fnv1a64(salt) ^ (0x9e3779b97f4a7c15ULL * (n + 1));
    return splitmix64(s);
}

}  // namespace probepack
