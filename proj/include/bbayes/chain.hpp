#ifndef BBAYES_CHAIN_HPP
#define BBAYES_CHAIN_HPP

#include <map>
#include <string>
#include <vector>

#include "bbayes/generator.hpp"
#include "bbayes/model.hpp"
#include "bbayes/search.hpp"
#include "bbayes/srf.hpp"

namespace bbayes {

// Exact finite-chain analysis of the SRF state process. Only stateless
// (fixed-bernoulli) model families close the state, so those are the only
// families accepted here; table-learning families are handled by Monte Carlo
// in the simulation harness instead.
struct ChainInstance {
    ModelSpace space;
    GeneratorSpec generator;
    std::size_t k = 1;
    SearchDistribution mu;
    std::size_t state_ceiling = 1000000;

    void validate() const;
    long long state_count() const;  // |S-alphabet|^k * |Omega|^2
};

struct ChainState {
    long long data_code = 0;  // mixed-radix period data block, earliest least significant
    std::size_t current = 0;
    std::size_t alternate = 0;
};

struct ChainModel {
    ChainInstance instance;
    std::vector<ChainState> states;
    std::vector<std::vector<double>> transition;  // row-stochastic
    std::vector<double> stationary;
    std::vector<bool> in_correct_set;  // C membership per state
};

std::vector<ChainState> enumerate_states(const ChainInstance& instance);

// Builds the exact transition matrix over the enumerated states.
ChainModel build_transition_matrix(const ChainInstance& instance);

// Expected per-step log score of a model under the generator, computed
// exactly; defines the partition into correct (C) and incorrect (D) states.
double expected_log_score(const ModelSpec& spec, const GeneratorSpec& gen);

// Marks states whose current model attains the maximal expected log score.
void assign_partition(ChainModel& chain);

struct IrreducibilityReport {
    bool irreducible = false;
    std::vector<std::size_t> unreachable;      // from state 0
    std::vector<std::size_t> non_returning;    // cannot reach state 0
};

IrreducibilityReport check_irreducible(const std::vector<std::vector<double>>& matrix);

// Power iteration (on the lazy chain, which shares the fixed point) to
// residual < 1e-12. Throws on a non-irreducible matrix.
std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& matrix);

// |sum_{s in C, t in D} pi_s p_st - sum_{s in C, t in D} pi_t p_ts| for the
// cut given by the membership mask.
double balance_residual(const ChainModel& chain, const std::vector<bool>& cut);

double pi_correct_mass(const ChainModel& chain);

// Total-variation distance between an SRF run's per-period state occupancy
// frequencies and the exact stationary distribution.
double occupancy_compare(const ChainModel& chain,
                         const std::map<OccupancyKey, long long>& counts, std::size_t run_k);

struct KSweepRow {
    std::size_t k = 0;
    double pi_correct = 0.0;
    long long state_count = 0;
};

std::vector<KSweepRow> sweep_k(const ChainInstance& base, const std::vector<std::size_t>& ks);

}  // namespace bbayes

#endif  // BBAYES_CHAIN_HPP
