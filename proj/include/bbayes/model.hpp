#ifndef BBAYES_MODEL_HPP
#define BBAYES_MODEL_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "bbayes/observation.hpp"

namespace bbayes {

enum class ModelFamily { FixedBernoulli, Cpt };

// One forecasting recipe: either a constant Bernoulli probability or a
// pseudo-count-smoothed conditional probability table over a subset of the
// pre-outcome variables.
struct ModelSpec {
    std::string id;
    ModelFamily family = ModelFamily::FixedBernoulli;
    double theta = 0.5;            // fixed-bernoulli only
    std::vector<int> deps;         // cpt only: 0-based indices into b
    double pseudo_count = 1.0;     // cpt only

    // bit-mask of conditioned pre-outcome variables
    std::uint32_t structure_mask() const;

    void validate(const Schema& schema) const;
};

int hamming_distance(std::uint32_t a, std::uint32_t b);

// Sufficient statistics of one model. Empty for fixed-bernoulli; per-context
// outcome counts for cpt.
class ModelState {
  public:
    struct Counts {
        long long ones = 0;
        long long zeros = 0;
    };

    const Counts& counts_for(long long context) const;
    long long total() const { return total_; }

    void add(long long context, int x);

    const std::unordered_map<long long, Counts>& table() const { return table_; }

  private:
    std::unordered_map<long long, Counts> table_;
    long long total_ = 0;
    static const Counts kEmpty;
};

// Mixed-radix context key of the dependency subset's values.
long long context_key(const ModelSpec& spec, const Schema& schema, const std::vector<int>& b);

// P_omega(X = 1 | sufficient statistics, b), always in (0, 1).
double predict(const ModelState& state, const ModelSpec& spec, const Schema& schema,
               const std::vector<int>& b);

// Folds one observation into the sufficient statistics.
void update_model(ModelState& state, const ModelSpec& spec, const Schema& schema,
                  const ObservationVector& obs);

// log P_omega(x_realized | state, b); finite by the (0,1) forecast contract.
double log_likelihood_increment(const ModelState& state, const ModelSpec& spec,
                                const Schema& schema, const ObservationVector& obs);

struct ModelSpace {
    Schema schema;
    std::vector<ModelSpec> models;
    std::vector<double> priors;  // normalized, strictly positive

    std::size_t size() const { return models.size(); }
    std::size_t index_of(const std::string& id) const;
};

// Validates and normalizes priors to sum 1.
ModelSpace build_model_space(Schema schema, std::vector<ModelSpec> specs,
                             std::vector<double> priors);

}  // namespace bbayes

#endif  // BBAYES_MODEL_HPP
