#ifndef BBAYES_CONFIG_HPP
#define BBAYES_CONFIG_HPP

#include <cstdint>
#include <string>

#include "bbayes/generator.hpp"
#include "bbayes/model.hpp"
#include "bbayes/search.hpp"
#include "bbayes/srf.hpp"

namespace bbayes {

struct ForecasterSettings {
    bool mixture = false;

    bool sr = false;
    SearchDistribution sr_mu;

    bool srf = false;
    SearchDistribution srf_mu;
    TrialPeriodConfig srf_trial;
    bool srf_state_occupancy = false;
};

struct ExperimentConfig {
    ModelSpace space;
    GeneratorSpec generator;
    ForecasterSettings forecasters;
    std::size_t horizon = 1;
    std::size_t replications = 1;
    std::uint64_t seed = 1;
    std::string out_dir = "out";

    void validate() const;
};

// Sectioned key=value configuration: [schema], [models] (one section per
// model), [generator], [forecasters], [run]. Unknown sections or keys are
// errors.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace bbayes

#endif  // BBAYES_CONFIG_HPP
