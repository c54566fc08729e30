#ifndef BBAYES_RNG_HPP
#define BBAYES_RNG_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace bbayes {

// Counter-based generator built on the splitmix64 finalizer. Each draw is a
// pure function of (key, counter), so independent streams never interact and
// replications can be dispatched in any order.
class CounterRng {
  public:
    static constexpr const char* kName = "splitmix64-counter";
    static constexpr int kVersion = 1;

    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    // uniform on [0, 1)
    double next_double();

    bool next_bernoulli(double p);

    // index sampled proportionally to weights (weights need not be normalized)
    std::size_t next_index(const std::vector<double>& weights);

    // uniform integer in [0, n)
    std::size_t next_below(std::size_t n);

    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Deterministic per-replication seed derivation from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replication);

}  // namespace bbayes

#endif  // BBAYES_RNG_HPP
