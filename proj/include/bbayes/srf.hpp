#ifndef BBAYES_SRF_HPP
#define BBAYES_SRF_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "bbayes/model.hpp"
#include "bbayes/rng.hpp"
#include "bbayes/search.hpp"

namespace bbayes {

enum class TrialSchedule { Fixed, Geometric };

struct TrialPeriodConfig {
    TrialSchedule schedule = TrialSchedule::Fixed;
    std::size_t k = 1;          // fixed
    std::size_t k0 = 1;         // geometric
    double growth = 1.5;        // geometric
    std::size_t cap = 256;      // geometric ceiling

    void validate() const;
};

// Trial length for period n (1-based). Geometric: ceil(k0 * growth^(n-1)),
// capped.
std::size_t schedule_k(std::size_t n, const TrialPeriodConfig& config);

// Log-likelihood of one trial period's data under a fresh model state, i.e.
// conditioning restarts from the empty history at the period boundary.
double trial_log_likelihood(const ModelSpec& spec, const Schema& schema,
                            std::span<const ObservationVector> period_data);

// The within-period comparison; ties keep current.
std::size_t srf_decide(std::size_t current, std::size_t alternate, double log_lambda_current,
                       double log_lambda_alternate, const ModelSpace& space);

struct SRFPeriodRow {
    std::size_t n = 0;         // 1-based period index
    std::size_t k = 0;
    std::size_t current = 0;
    std::size_t alternate = 0;
    double log_lambda_current = 0.0;
    double log_lambda_alternate = 0.0;
    std::size_t chosen = 0;
};

// Occupancy key for one completed period: the encoded period data block plus
// the (current, alternate) pair. data_code is the mixed-radix encoding of the
// period's symbols (earliest observation least significant).
struct OccupancyKey {
    long long data_code = 0;
    std::size_t current = 0;
    std::size_t alternate = 0;

    auto operator<=>(const OccupancyKey&) const = default;
};

struct SRFRunRecord {
    std::vector<double> forecasts;
    std::vector<double> prob_assigned;
    std::vector<std::size_t> current_ids;
    std::vector<SRFPeriodRow> periods;
    std::map<std::pair<std::size_t, std::size_t>, long long> pair_occupancy;
    std::map<OccupancyKey, long long> state_occupancy;  // fixed schedule only
    std::size_t discarded_tail_steps = 0;  // final partial period, excluded from decisions
};

struct SRFOptions {
    std::optional<std::size_t> initial_current;
    std::optional<std::size_t> initial_alternate;
    bool record_state_occupancy = false;
    bool record_steps = true;  // forecast series; off for long occupancy runs
};

// Runs SRF over the stream. Forecasts use all data since the current model
// was enumerated; decisions use only within-period data for both models.
SRFRunRecord run_srf(const ModelSpace& space, const SearchDistribution& dist,
                     const TrialPeriodConfig& config,
                     const std::vector<ObservationVector>& stream, std::size_t horizon,
                     CounterRng& search_rng, const SRFOptions& options = {});

}  // namespace bbayes

#endif  // BBAYES_SRF_HPP
