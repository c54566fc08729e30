#include "bbayes/sr.hpp"

#include <cmath>
#include <stdexcept>

namespace bbayes {

BackfillResult backfill_likelihood(const ModelSpec& spec, const Trace& trace) {
    BackfillResult r;
    for (const auto& obs : trace.records()) {
        r.log_lambda += log_likelihood_increment(r.state, spec, trace.schema(), obs);
        update_model(r.state, spec, trace.schema(), obs);
    }
    return r;
}

std::size_t select_alternate(SRState& state, const ModelSpace& space,
                             const SearchDistribution& dist, CounterRng& rng) {
    const auto mu = dist.probabilities(space, state.current);
    const std::size_t pick = rng.next_index(mu);
    state.alternate = pick;
    return pick;
}

std::size_t sr_decide(const SRState& state, const ModelSpace& space) {
    const auto it_c = state.ledger.find(state.current);
    const auto it_a = state.ledger.find(state.alternate);
    if (it_c == state.ledger.end() || it_a == state.ledger.end())
        throw std::invalid_argument("ledger missing an entry for current or alternate");
    const double score_c = std::log(space.priors[state.current]) + it_c->second;
    const double score_a = std::log(space.priors[state.alternate]) + it_a->second;
    return score_c >= score_a ? state.current : state.alternate;
}

double sr_forecast(const SRState& state, const ModelSpace& space, const std::vector<int>& b) {
    const auto it = state.states.find(state.current);
    if (it == state.states.end())
        throw std::invalid_argument("current model has no tracked state");
    return predict(it->second, space.models[state.current], space.schema, b);
}

namespace {

void track(SRState& state, const ModelSpace& space, const Trace& trace, std::size_t idx) {
    if (state.ledger.count(idx)) return;
    auto backfilled = backfill_likelihood(space.models[idx], trace);
    state.ledger.emplace(idx, backfilled.log_lambda);
    state.states.emplace(idx, std::move(backfilled.state));
}

}  // namespace

SRRunRecord run_sr(const ModelSpace& space, const SearchDistribution& dist,
                   const std::vector<ObservationVector>& stream, std::size_t horizon,
                   CounterRng& search_rng, const SROptions& options) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (stream.size() < horizon) throw std::invalid_argument("stream shorter than horizon");

    SRRunRecord rec;
    SRState& st = rec.final_state;
    Trace trace(space.schema);

    if (options.initial_current) {
        st.current = *options.initial_current;
    } else {
        st.current = search_rng.next_index(space.priors);
    }
    if (options.initial_alternate) {
        st.alternate = *options.initial_alternate;
    } else if (space.size() == 1) {
        st.alternate = st.current;
    } else {
        do {
            st.alternate = search_rng.next_index(space.priors);
        } while (st.alternate == st.current);
    }
    if (st.current >= space.size() || st.alternate >= space.size())
        throw std::invalid_argument("initial model index out of range");
    track(st, space, trace, st.current);
    track(st, space, trace, st.alternate);

    rec.forecasts.reserve(horizon);
    rec.prob_assigned.reserve(horizon);
    rec.current_ids.reserve(horizon);

    for (std::size_t step = 1; step <= horizon; ++step) {
        const ObservationVector& obs = stream[step - 1];

        const double p = sr_forecast(st, space, obs.b);
        rec.forecasts.push_back(p);
        rec.current_ids.push_back(st.current);

        // the alternate is sampled strictly before x_t is consumed
        select_alternate(st, space, dist, search_rng);
        track(st, space, trace, st.alternate);

        rec.prob_assigned.push_back(obs.x == 1 ? p : 1.0 - p);
        for (auto& [idx, entry] : st.ledger) {
            entry += log_likelihood_increment(st.states.at(idx), space.models[idx],
                                              space.schema, obs);
        }
        for (auto& [idx, mstate] : st.states)
            update_model(mstate, space.models[idx], space.schema, obs);
        trace.append(obs);

        const std::size_t chosen = sr_decide(st, space);
        rec.decisions.push_back(SRDecisionRow{step, st.current, st.alternate,
                                              st.ledger.at(st.current),
                                              st.ledger.at(st.alternate), chosen});
        if (chosen != st.current) {
            const double diff =
                (std::log(space.priors[st.alternate]) + st.ledger.at(st.alternate)) -
                (std::log(space.priors[st.current]) + st.ledger.at(st.current));
            rec.switches.push_back(SRSwitchEvent{step, st.current, chosen, diff});
            st.current = chosen;
        }
    }
    return rec;
}

}  // namespace bbayes
