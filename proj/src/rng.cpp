#include "causalid/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace causalid {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

DiscreteSampler::DiscreteSampler(const std::vector<double>& weights) {
    if (weights.empty()) throw std::invalid_argument("discrete sampler: empty weights");
    cdf_.resize(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] >= 0.0)) {
            throw std::invalid_argument("discrete sampler: negative weight");
        }
        acc += weights[i];
        cdf_[i] = acc;
    }
    if (acc <= 0.0) throw std::invalid_argument("discrete sampler: zero total weight");
    for (double& c : cdf_) c /= acc;
    cdf_.back() = 1.0;
}

std::size_t DiscreteSampler::draw(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<std::size_t>(it - cdf_.begin());
}

} // namespace causalid
