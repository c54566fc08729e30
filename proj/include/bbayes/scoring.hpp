#ifndef BBAYES_SCORING_HPP
#define BBAYES_SCORING_HPP

#include <vector>

#include "bbayes/generator.hpp"
#include "bbayes/model.hpp"
#include "bbayes/sr.hpp"

namespace bbayes {

struct ScoreReport {
    double average = 0.0;             // U_T
    std::vector<double> per_step;     // log of probability assigned to the realized event
    std::vector<double> running;      // U_t trajectory
};

// Average logarithmic score of the probabilities assigned to realized events.
ScoreReport log_score_report(const std::vector<double>& prob_assigned);
double log_score_average(const std::vector<double>& prob_assigned);

struct ConvergenceReport {
    std::vector<double> gaps;  // |A_t - B_t|
    std::vector<double> epsilons;
    // fractions[w][e]: fraction of window w's steps with gap > epsilons[e]
    std::vector<std::vector<double>> exceedance;
    std::size_t windows = 0;
};

// Windowed exceedance fractions of the pointwise gap between two forecast
// series; the empirical convergence-in-probability estimate.
ConvergenceReport forecast_gap_series(const std::vector<double>& a,
                                      const std::vector<double>& b,
                                      const std::vector<double>& epsilons,
                                      std::size_t windows = 10);

// Pointwise ratio of probabilities assigned to the realized outcome.
std::vector<double> truth_ratio_series(const std::vector<double>& forecaster,
                                       const std::vector<double>& truth);

struct MartingaleCheck {
    double max_deviation = 0.0;       // likelihood-ratio martingale identity
    double min_mixture_ratio = 0.0;   // prior-weighted ratio, bounded below by the
                                      // truth model's prior
};

// Enumerates next-step outcomes on a trace prefix and checks that the
// one-step conditional expectation of each likelihood ratio equals its
// current value; also reports the mixture ratio lower bound.
MartingaleCheck martingale_oracle(const ModelSpace& space, const std::string& truth_id,
                                  const Trace& prefix);

struct BestScorerCheck {
    bool all_agree = true;
    std::size_t first_counterexample = 0;  // 1-based step, valid when !all_agree
};

// With equal priors, each SR decision must coincide with the argmax of past
// average log score between the incumbent and the challenger.
BestScorerCheck sr_equals_best_scorer_check(const ModelSpace& space, const SRRunRecord& run);

}  // namespace bbayes

#endif  // BBAYES_SCORING_HPP
