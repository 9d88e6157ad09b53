#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace chunkforge {

/// Seeded RNG with pinned derivations.  The standard distributions are
/// implementation-defined, so anything that must reproduce bit-for-bit
/// (synthetic corpora, evaluation shuffles) draws through this wrapper.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform integer in [0, n).  n must be > 0.
    std::uint64_t below(std::uint64_t n) { return gen_() % n; }

    /// Uniform double in [0, 1).
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Fisher-Yates shuffle, deterministic for a fixed seed.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace chunkforge
