#include "bbayes/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bbayes {

MixtureState MixtureState::initial(const ModelSpace& space) {
    MixtureState s;
    s.posterior = space.priors;
    s.log_lambda.assign(space.size(), 0.0);
    s.states.resize(space.size());
    s.t = 0;
    return s;
}

void posterior_update(MixtureState& state, const std::vector<double>& likelihoods) {
    if (likelihoods.size() != state.posterior.size())
        throw std::invalid_argument("likelihood count does not match model count");
    std::vector<double> log_post(state.posterior.size());
    for (std::size_t i = 0; i < likelihoods.size(); ++i) {
        if (!(likelihoods[i] > 0.0 && likelihoods[i] < 1.0))
            throw std::invalid_argument("realized likelihood outside (0,1)");
        const double ll = std::log(likelihoods[i]);
        state.log_lambda[i] += ll;
        log_post[i] = std::log(state.posterior[i]) + ll;
    }
    const double m = *std::max_element(log_post.begin(), log_post.end());
    double total = 0.0;
    for (std::size_t i = 0; i < log_post.size(); ++i) {
        state.posterior[i] = std::exp(log_post[i] - m);
        total += state.posterior[i];
    }
    for (double& w : state.posterior) w /= total;
    ++state.t;
}

double mixture_forecast(const std::vector<double>& posterior,
                        const std::vector<double>& forecasts) {
    if (posterior.size() != forecasts.size())
        throw std::invalid_argument("forecast count does not match weight count");
    double p = 0.0;
    for (std::size_t i = 0; i < posterior.size(); ++i) p += posterior[i] * forecasts[i];
    return p;
}

MixtureRunRecord run_mixture(const ModelSpace& space,
                             const std::vector<ObservationVector>& stream,
                             std::size_t horizon) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (stream.size() < horizon) throw std::invalid_argument("stream shorter than horizon");

    MixtureRunRecord rec;
    rec.final_state = MixtureState::initial(space);
    MixtureState& st = rec.final_state;
    rec.forecasts.reserve(horizon);
    rec.prob_assigned.reserve(horizon);
    rec.posterior_trajectory.reserve(horizon);

    std::vector<double> per_model(space.size());
    for (std::size_t t = 0; t < horizon; ++t) {
        const ObservationVector& obs = stream[t];
        // forecast is emitted before the outcome is consumed
        for (std::size_t i = 0; i < space.size(); ++i)
            per_model[i] = predict(st.states[i], space.models[i], space.schema, obs.b);
        const double p = mixture_forecast(st.posterior, per_model);
        rec.forecasts.push_back(p);
        rec.prob_assigned.push_back(obs.x == 1 ? p : 1.0 - p);

        std::vector<double> realized(space.size());
        for (std::size_t i = 0; i < space.size(); ++i)
            realized[i] = obs.x == 1 ? per_model[i] : 1.0 - per_model[i];
        posterior_update(st, realized);
        for (std::size_t i = 0; i < space.size(); ++i)
            update_model(st.states[i], space.models[i], space.schema, obs);
        rec.posterior_trajectory.push_back(st.posterior);
    }
    return rec;
}

}  // namespace bbayes
