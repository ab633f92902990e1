#pragma once

#include <cstdint>
#include <vector>

// Self-contained splitmix64 generator. Standard-library distributions are
// not bit-stable across implementations, so every seeded draw in the
// simulator goes through this.

namespace gnnsim {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double next_double(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

// Fisher-Yates permutation of [0, n), fully determined by the seed.
inline std::vector<int> seeded_permutation(std::uint64_t seed, int n) {
    std::vector<int> order(std::size_t(n), 0);
    for (int i = 0; i < n; ++i) order[std::size_t(i)] = i;
    SplitMix64 rng(seed);
    for (int i = n - 1; i > 0; --i) {
        const int j = int(rng.next_below(std::uint64_t(i) + 1));
        std::swap(order[std::size_t(i)], order[std::size_t(j)]);
    }
    return order;
}

}  // namespace gnnsim
