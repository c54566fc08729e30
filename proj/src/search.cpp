#include "bbayes/search.hpp"

#include <cmath>
#include <stdexcept>

namespace bbayes {

void SearchDistribution::validate() const {
    if (kind == SearchKind::Neighborhood) {
        if (!(temperature > 0.0))
            throw std::invalid_argument("neighborhood temperature must be positive");
        if (!(uniform_floor > 0.0 && uniform_floor < 1.0))
            throw std::invalid_argument("uniform floor must lie in (0,1)");
    }
}

std::vector<double> SearchDistribution::probabilities(const ModelSpace& space,
                                                      std::size_t current) const {
    validate();
    const std::size_t n = space.size();
    if (current >= n) throw std::invalid_argument("current model index out of range");
    std::vector<double> p(n);
    switch (kind) {
        case SearchKind::Uniform:
            for (double& w : p) w = 1.0 / static_cast<double>(n);
            break;
        case SearchKind::PriorProportional:
            p = space.priors;
            break;
        case SearchKind::Neighborhood: {
            const std::uint32_t mc = space.models[current].structure_mask();
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                p[i] = std::exp(-hamming_distance(mc, space.models[i].structure_mask()) /
                                temperature);
                total += p[i];
            }
            for (std::size_t i = 0; i < n; ++i)
                p[i] = (1.0 - uniform_floor) * p[i] / total +
                       uniform_floor / static_cast<double>(n);
            break;
        }
    }
    return p;
}

}  // namespace bbayes
