#ifndef BBAYES_SR_HPP
#define BBAYES_SR_HPP

#include <optional>
#include <unordered_map>
#include <vector>

#include "bbayes/model.hpp"
#include "bbayes/rng.hpp"
#include "bbayes/search.hpp"

namespace bbayes {

// Search-and-revise forecaster state. The ledger holds the cumulative
// log-likelihood over the full trace for every model enumerated so far;
// once enumerated a model's statistics are kept current every step, so the
// O(T) backfill happens at most once per model.
struct SRState {
    std::size_t current = 0;
    std::size_t alternate = 0;
    std::unordered_map<std::size_t, double> ledger;       // log lambda per model index
    std::unordered_map<std::size_t, ModelState> states;
};

struct BackfillResult {
    double log_lambda = 0.0;
    ModelState state;
};

// Replays the whole trace through a fresh state, summing log increments.
BackfillResult backfill_likelihood(const ModelSpec& spec, const Trace& trace);

// Samples the next alternate from mu; records it in the state.
std::size_t select_alternate(SRState& state, const ModelSpace& space,
                             const SearchDistribution& dist, CounterRng& rng);

// The prior-weighted full-history likelihood comparison; ties keep current.
std::size_t sr_decide(const SRState& state, const ModelSpace& space);

// Forecast of the current model alone.
double sr_forecast(const SRState& state, const ModelSpace& space, const std::vector<int>& b);

struct SRSwitchEvent {
    std::size_t t = 0;  // 1-based step
    std::size_t from = 0;
    std::size_t to = 0;
    double log_score_diff = 0.0;  // challenger minus incumbent, prior-weighted
};

struct SRDecisionRow {
    std::size_t t = 0;
    std::size_t current = 0;
    std::size_t alternate = 0;
    double log_lambda_current = 0.0;
    double log_lambda_alternate = 0.0;
    std::size_t chosen = 0;
};

struct SRRunRecord {
    std::vector<double> forecasts;
    std::vector<double> prob_assigned;
    std::vector<std::size_t> current_ids;   // model used to forecast step t
    std::vector<SRSwitchEvent> switches;
    std::vector<SRDecisionRow> decisions;
    SRState final_state;
};

struct SROptions {
    std::optional<std::size_t> initial_current;
    std::optional<std::size_t> initial_alternate;
};

// Per step: forecast, sample alternate, observe, update tracked models,
// decide. The alternate is drawn before the outcome is consumed.
SRRunRecord run_sr(const ModelSpace& space, const SearchDistribution& dist,
                   const std::vector<ObservationVector>& stream, std::size_t horizon,
                   CounterRng& search_rng, const SROptions& options = {});

}  // namespace bbayes

#endif  // BBAYES_SR_HPP
