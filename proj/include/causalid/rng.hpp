#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace causalid {

/// SplitMix64 step, used to derive per-replica seeds from a master seed by
/// counter: derive_seed(master, k) hashes (master, k) into a fresh 64-bit seed.
std::uint64_t splitmix64(std::uint64_t z);

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
    return splitmix64(master + 0x9E3779B97F4A7C15ULL * (counter + 1));
}

/// Deterministic random stream: std::mt19937_64 with an explicit mapping to
/// uniform doubles in [0, 1), so draws are identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t next_u64() { return engine_(); }

    /// Index in [0, n).
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
    }

private:
    std::mt19937_64 engine_;
};

/// Inverse-CDF sampler over a fixed non-negative weight vector.
class DiscreteSampler {
public:
    explicit DiscreteSampler(const std::vector<double>& weights);

    std::size_t draw(Rng& rng) const;

private:
    std::vector<double> cdf_;
};

} // namespace causalid
