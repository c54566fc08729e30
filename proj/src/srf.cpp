#include "bbayes/srf.hpp"

#include <cmath>
#include <stdexcept>

namespace bbayes {

void TrialPeriodConfig::validate() const {
    if (schedule == TrialSchedule::Fixed) {
        if (k < 1) throw std::invalid_argument("trial length must be >= 1");
    } else {
        if (k0 < 1) throw std::invalid_argument("trial length must be >= 1");
        if (!(growth >= 1.0)) throw std::invalid_argument("geometric growth must be >= 1");
        if (cap < k0) throw std::invalid_argument("schedule cap below initial trial length");
    }
}

std::size_t schedule_k(std::size_t n, const TrialPeriodConfig& config) {
    config.validate();
    if (n < 1) throw std::invalid_argument("period index starts at 1");
    if (config.schedule == TrialSchedule::Fixed) return config.k;
    const double raw = static_cast<double>(config.k0) *
                       std::pow(config.growth, static_cast<double>(n - 1));
    if (raw >= static_cast<double>(config.cap)) return config.cap;
    return static_cast<std::size_t>(std::ceil(raw));
}

double trial_log_likelihood(const ModelSpec& spec, const Schema& schema,
                            std::span<const ObservationVector> period_data) {
    if (period_data.empty()) throw std::invalid_argument("trial period data must be non-empty");
    ModelState fresh;
    double total = 0.0;
    for (const auto& obs : period_data) {
        total += log_likelihood_increment(fresh, spec, schema, obs);
        update_model(fresh, spec, schema, obs);
    }
    return total;
}

std::size_t srf_decide(std::size_t current, std::size_t alternate, double log_lambda_current,
                       double log_lambda_alternate, const ModelSpace& space) {
    const double score_c = std::log(space.priors[current]) + log_lambda_current;
    const double score_a = std::log(space.priors[alternate]) + log_lambda_alternate;
    return score_c >= score_a ? current : alternate;
}

SRFRunRecord run_srf(const ModelSpace& space, const SearchDistribution& dist,
                     const TrialPeriodConfig& config,
                     const std::vector<ObservationVector>& stream, std::size_t horizon,
                     CounterRng& search_rng, const SRFOptions& options) {
    config.validate();
    const std::size_t k1 = schedule_k(1, config);
    if (horizon < k1) throw std::invalid_argument("horizon shorter than the first trial period");
    if (stream.size() < horizon) throw std::invalid_argument("stream shorter than horizon");
    if (options.record_state_occupancy && config.schedule != TrialSchedule::Fixed)
        throw std::invalid_argument("state occupancy requires a fixed trial length");

    SRFRunRecord rec;
    std::size_t current;
    std::size_t alternate;
    if (options.initial_current) {
        current = *options.initial_current;
    } else {
        current = search_rng.next_index(space.priors);
    }
    if (options.initial_alternate) {
        alternate = *options.initial_alternate;
    } else if (space.size() == 1) {
        alternate = current;
    } else {
        do {
            alternate = search_rng.next_index(space.priors);
        } while (alternate == current);
    }
    if (current >= space.size() || alternate >= space.size())
        throw std::invalid_argument("initial model index out of range");

    // forecast statistics of the current model: all data since its adoption
    ModelState forecast_state;
    const long long symbol_base = space.schema.symbol_count();

    std::size_t consumed = 0;
    std::size_t n = 0;
    while (true) {
        const std::size_t kn = schedule_k(n + 1, config);
        if (consumed + kn > horizon) {
            rec.discarded_tail_steps = horizon - consumed;
            // the partial tail is still forecast and scored, decision dropped
            for (std::size_t s = consumed; s < horizon && options.record_steps; ++s) {
                const ObservationVector& obs = stream[s];
                const double p = predict(forecast_state, space.models[current],
                                         space.schema, obs.b);
                rec.forecasts.push_back(p);
                rec.prob_assigned.push_back(obs.x == 1 ? p : 1.0 - p);
                rec.current_ids.push_back(current);
                update_model(forecast_state, space.models[current], space.schema, obs);
            }
            break;
        }
        ++n;

        // within-period statistics restart from the empty history for both models
        ModelState trial_current;
        ModelState trial_alternate;
        double ll_current = 0.0;
        double ll_alternate = 0.0;
        long long data_code = 0;
        long long place = 1;

        for (std::size_t s = 0; s < kn; ++s) {
            const ObservationVector& obs = stream[consumed + s];
            if (options.record_steps) {
                const double p = predict(forecast_state, space.models[current],
                                         space.schema, obs.b);
                rec.forecasts.push_back(p);
                rec.prob_assigned.push_back(obs.x == 1 ? p : 1.0 - p);
                rec.current_ids.push_back(current);
            }
            ll_current += log_likelihood_increment(trial_current, space.models[current],
                                                   space.schema, obs);
            ll_alternate += log_likelihood_increment(trial_alternate, space.models[alternate],
                                                     space.schema, obs);
            update_model(trial_current, space.models[current], space.schema, obs);
            update_model(trial_alternate, space.models[alternate], space.schema, obs);
            update_model(forecast_state, space.models[current], space.schema, obs);
            if (options.record_state_occupancy) {
                data_code += place * encode_symbol(space.schema, obs);
                place *= symbol_base;
            }
        }
        consumed += kn;

        const std::size_t chosen = srf_decide(current, alternate, ll_current, ll_alternate, space);
        rec.periods.push_back(
            SRFPeriodRow{n, kn, current, alternate, ll_current, ll_alternate, chosen});
        ++rec.pair_occupancy[{current, alternate}];
        if (options.record_state_occupancy)
            ++rec.state_occupancy[OccupancyKey{data_code, current, alternate}];

        if (chosen != current) {
            // the adopted model's since-enumeration data is exactly this period
            forecast_state = std::move(trial_alternate);
            current = chosen;
        }
        // next alternate sampled from mu(. | Q_n); fresh statistics next period
        const auto mu = dist.probabilities(space, current);
        alternate = search_rng.next_index(mu);
    }
    return rec;
}

}  // namespace bbayes
