#include "bbayes/rng.hpp"

#include <stdexcept>

namespace bbayes {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed + kGolden * mix64(stream + kGolden))) {}

std::uint64_t CounterRng::next_u64() {
    return mix64(key_ + kGolden * ++counter_);
}

double CounterRng::next_double() {
    // 53 random bits into [0, 1)
    return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
}

bool CounterRng::next_bernoulli(double p) {
    return next_double() < p;
}

std::size_t CounterRng::next_index(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("negative sampling weight");
        total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("sampling weights sum to zero");
    double u = next_double() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
}

std::size_t CounterRng::next_below(std::size_t n) {
    if (n == 0) throw std::invalid_argument("next_below(0)");
    return static_cast<std::size_t>(next_double() * static_cast<double>(n)) % n;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replication) {
    return mix64(master + kGolden * mix64(replication + 1));
}

}  // namespace bbayes
