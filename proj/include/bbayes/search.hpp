#ifndef BBAYES_SEARCH_HPP
#define BBAYES_SEARCH_HPP

#include <vector>

#include "bbayes/model.hpp"

namespace bbayes {

enum class SearchKind { Uniform, PriorProportional, Neighborhood };

// Model search distribution mu over the space. Every kind assigns strictly
// positive probability to every model. The neighborhood kind weights models
// by exp(-hamming(structure_current, structure_omega) / temperature) and
// floor-mixes with uniform so distant models stay reachable.
struct SearchDistribution {
    SearchKind kind = SearchKind::Uniform;
    double temperature = 1.0;
    double uniform_floor = 0.01;  // neighborhood only

    void validate() const;

    // probability of each model given the current model's index
    std::vector<double> probabilities(const ModelSpace& space, std::size_t current) const;
};

}  // namespace bbayes

#endif  // BBAYES_SEARCH_HPP
