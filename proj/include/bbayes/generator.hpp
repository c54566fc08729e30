#ifndef BBAYES_GENERATOR_HPP
#define BBAYES_GENERATOR_HPP

#include <optional>
#include <string>
#include <vector>

#include "bbayes/observation.hpp"
#include "bbayes/rng.hpp"

namespace bbayes {

enum class GeneratorKind { Bernoulli, Table, Parity };

// iid source of observation vectors. Pre- and post-outcome variables are
// drawn uniformly over their alphabets; the outcome probability is either a
// constant, a table over a dependency subset of b, or a parity rule over two
// binary b variables.
struct GeneratorSpec {
    Schema schema;
    GeneratorKind kind = GeneratorKind::Bernoulli;

    double theta = 0.5;                 // bernoulli
    std::vector<int> deps;              // table: 0-based b indices
    std::vector<double> table_probs;    // table: P(X=1 | context), lexicographic contexts
    int parity_i = 0;                   // parity: the two b indices
    int parity_j = 1;
    double p_odd = 0.9;                 // parity: P(X=1 | b_i xor b_j = 1)
    double p_even = 0.1;

    // id of the matching model when the truth lies in the model space
    std::optional<std::string> truth_id;

    void validate() const;

    // true conditional probability P(X=1 | b)
    double p_x_given_b(const std::vector<int>& b) const;

    // probability of one full observation vector under the iid law
    double symbol_prob(const ObservationVector& obs) const;

    ObservationVector sample(CounterRng& rng) const;
};

std::vector<ObservationVector> generate_stream(const GeneratorSpec& spec, std::uint64_t seed,
                                               std::size_t horizon);

// Enumerates all pre-outcome contexts (lexicographic) with their probabilities.
std::vector<std::pair<std::vector<int>, double>> enumerate_contexts(const Schema& schema);

}  // namespace bbayes

#endif  // BBAYES_GENERATOR_HPP
