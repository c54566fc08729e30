#ifndef BBAYES_EXPERIMENT_HPP
#define BBAYES_EXPERIMENT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bbayes/chain.hpp"
#include "bbayes/config.hpp"
#include "bbayes/mixture.hpp"
#include "bbayes/sr.hpp"
#include "bbayes/srf.hpp"

namespace bbayes {

struct ReplicationOutput {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::vector<ObservationVector> stream;
    std::optional<MixtureRunRecord> mixture;
    std::optional<SRRunRecord> sr;
    std::optional<SRFRunRecord> srf;
};

struct ExperimentResult {
    std::vector<ReplicationOutput> replications;
};

// Runs every requested forecaster on the identical stream per replication.
// When write_files is set, per-replication CSV/JSON outputs plus the summary
// land under config.out_dir. Replications run in parallel, capped by the
// BBAYES_THREADS environment variable.
ExperimentResult run_experiment(const ExperimentConfig& config, bool write_files = true,
                                bool quiet = true);

// Formats a double with 12 significant digits, the CSV number format.
std::string csv_number(double v);

struct StepRow {
    std::size_t t = 0;
    double forecast = 0.0;
    int x = 0;
    std::vector<int> b;
    std::vector<int> a;
};

struct StoredSteps {
    std::vector<std::string> forecasters;              // in file order
    std::map<std::string, std::vector<StepRow>> rows;
};

StoredSteps read_steps_csv(const std::string& path);

// Recomputes score reports from stored per-step files under run_dir,
// validating row counts against the stored summary. Throws on tampering.
void score_stored_run(const std::string& run_dir, bool quiet);

// Emits the gap series between two stored forecasters (and, when the config
// is supplied, the truth-ratio series of forecaster a) as (t, value) CSV.
void compare_stored_run(const std::string& run_dir, std::size_t replication,
                        const std::string& forecaster_a, const std::string& forecaster_b,
                        const std::optional<ExperimentConfig>& config, bool quiet);

// Exact chain analysis driven from an experiment config: builds the chain at
// each trial length, writes chain_report.json and ksweep.csv under out_dir.
void run_chain_report(const ExperimentConfig& config, const std::vector<std::size_t>& ks,
                      const std::string& out_dir, bool quiet);

}  // namespace bbayes

#endif  // BBAYES_EXPERIMENT_HPP
