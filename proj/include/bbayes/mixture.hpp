#ifndef BBAYES_MIXTURE_HPP
#define BBAYES_MIXTURE_HPP

#include <vector>

#include "bbayes/model.hpp"

namespace bbayes {

// Full Bayesian mixture over the model space: posterior weights and
// per-model cumulative log-likelihoods, updated in log space.
struct MixtureState {
    std::vector<double> posterior;
    std::vector<double> log_lambda;      // cumulative log-likelihood per model
    std::vector<ModelState> states;
    long long t = 0;

    static MixtureState initial(const ModelSpace& space);
};

// Bayes update of the posterior given one realized likelihood per model.
void posterior_update(MixtureState& state, const std::vector<double>& likelihoods);

// Prior-weighted convex combination of per-model forecasts.
double mixture_forecast(const std::vector<double>& posterior,
                        const std::vector<double>& forecasts);

struct MixtureRunRecord {
    std::vector<double> forecasts;            // p_t, one per step
    std::vector<double> prob_assigned;        // probability assigned to realized x_t
    std::vector<std::vector<double>> posterior_trajectory;  // posterior after each step
    MixtureState final_state;
};

// Drives the mixture over the first `horizon` observations of the stream.
MixtureRunRecord run_mixture(const ModelSpace& space,
                             const std::vector<ObservationVector>& stream,
                             std::size_t horizon);

}  // namespace bbayes

#endif  // BBAYES_MIXTURE_HPP
