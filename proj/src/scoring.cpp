#include "bbayes/scoring.hpp"

#include <cmath>
#include <stdexcept>

namespace bbayes {

ScoreReport log_score_report(const std::vector<double>& prob_assigned) {
    if (prob_assigned.empty()) throw std::invalid_argument("empty score input");
    ScoreReport rep;
    rep.per_step.reserve(prob_assigned.size());
    rep.running.reserve(prob_assigned.size());
    double total = 0.0;
    for (std::size_t i = 0; i < prob_assigned.size(); ++i) {
        const double p = prob_assigned[i];
        if (!(p > 0.0 && p <= 1.0))
            throw std::invalid_argument("scored probability must lie in (0,1]");
        rep.per_step.push_back(std::log(p));
        total += rep.per_step.back();
        rep.running.push_back(total / static_cast<double>(i + 1));
    }
    rep.average = rep.running.back();
    return rep;
}

double log_score_average(const std::vector<double>& prob_assigned) {
    return log_score_report(prob_assigned).average;
}

ConvergenceReport forecast_gap_series(const std::vector<double>& a,
                                      const std::vector<double>& b,
                                      const std::vector<double>& epsilons,
                                      std::size_t windows) {
    if (a.size() != b.size()) throw std::invalid_argument("forecast series length mismatch");
    if (a.empty()) throw std::invalid_argument("empty forecast series");
    if (windows < 1 || windows > a.size())
        throw std::invalid_argument("window count out of range");
    ConvergenceReport rep;
    rep.epsilons = epsilons;
    rep.windows = windows;
    rep.gaps.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) rep.gaps.push_back(std::abs(a[i] - b[i]));
    rep.exceedance.assign(windows, std::vector<double>(epsilons.size(), 0.0));
    for (std::size_t w = 0; w < windows; ++w) {
        const std::size_t lo = w * a.size() / windows;
        const std::size_t hi = (w + 1) * a.size() / windows;
        for (std::size_t e = 0; e < epsilons.size(); ++e) {
            std::size_t over = 0;
            for (std::size_t i = lo; i < hi; ++i)
                if (rep.gaps[i] > epsilons[e]) ++over;
            rep.exceedance[w][e] = static_cast<double>(over) / static_cast<double>(hi - lo);
        }
    }
    return rep;
}

std::vector<double> truth_ratio_series(const std::vector<double>& forecaster,
                                       const std::vector<double>& truth) {
    if (forecaster.size() != truth.size())
        throw std::invalid_argument("ratio series length mismatch");
    std::vector<double> out;
    out.reserve(forecaster.size());
    for (std::size_t i = 0; i < forecaster.size(); ++i) {
        if (!(truth[i] > 0.0)) throw std::invalid_argument("truth probability must be positive");
        out.push_back(forecaster[i] / truth[i]);
    }
    return out;
}

MartingaleCheck martingale_oracle(const ModelSpace& space, const std::string& truth_id,
                                  const Trace& prefix) {
    const std::size_t star = space.index_of(truth_id);

    // replay the prefix once per model to obtain states and cumulative logs
    std::vector<ModelState> states(space.size());
    std::vector<double> log_lambda(space.size(), 0.0);
    for (const auto& obs : prefix.records()) {
        for (std::size_t i = 0; i < space.size(); ++i) {
            log_lambda[i] += log_likelihood_increment(states[i], space.models[i],
                                                      space.schema, obs);
            update_model(states[i], space.models[i], space.schema, obs);
        }
    }

    MartingaleCheck check;
    // E[R_t | H_{t-1}] / R_{t-1} = sum_x P_star(x) P_omega(x) / P_star(x); the
    // deviation of that factor from 1 is the scale-free martingale residual
    for (const auto& [b, pb] : enumerate_contexts(space.schema)) {
        (void)pb;
        const double p_star = predict(states[star], space.models[star], space.schema, b);
        for (std::size_t i = 0; i < space.size(); ++i) {
            const double p_omega = predict(states[i], space.models[i], space.schema, b);
            const double factor = p_star * (p_omega / p_star) +
                                  (1.0 - p_star) * ((1.0 - p_omega) / (1.0 - p_star));
            check.max_deviation = std::max(check.max_deviation, std::abs(factor - 1.0));
        }
    }

    double mixture_ratio = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i)
        mixture_ratio += space.priors[i] * std::exp(log_lambda[i] - log_lambda[star]);
    check.min_mixture_ratio = mixture_ratio;
    return check;
}

BestScorerCheck sr_equals_best_scorer_check(const ModelSpace& space, const SRRunRecord& run) {
    for (double p : space.priors)
        if (std::abs(p - space.priors.front()) > 1e-12)
            throw std::invalid_argument("best-scorer check applies only with equal priors");
    BestScorerCheck check;
    for (const auto& row : run.decisions) {
        const double t = static_cast<double>(row.t);
        const double avg_c = row.log_lambda_current / t;
        const double avg_a = row.log_lambda_alternate / t;
        const std::size_t argmax = avg_c >= avg_a ? row.current : row.alternate;
        if (argmax != row.chosen) {
            check.all_agree = false;
            check.first_counterexample = row.t;
            break;
        }
    }
    return check;
}

}  // namespace bbayes
