#include "bbayes/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "bbayes/rng.hpp"
#include "bbayes/scoring.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace bbayes {

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

std::size_t thread_cap() {
    std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("BBAYES_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) cap = static_cast<std::size_t>(v);
    }
    return cap;
}

std::string rep_dir_name(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "rep_%03zu", index);
    return buf;
}

ReplicationOutput run_replication(const ExperimentConfig& config, std::size_t index) {
    ReplicationOutput out;
    out.index = index;
    out.seed = derive_seed(config.seed, index);
    out.stream = generate_stream(config.generator, out.seed, config.horizon);

    if (config.forecasters.mixture)
        out.mixture = run_mixture(config.space, out.stream, config.horizon);
    if (config.forecasters.sr) {
        CounterRng rng(out.seed, /*stream=*/1);
        out.sr = run_sr(config.space, config.forecasters.sr_mu, out.stream, config.horizon, rng);
    }
    if (config.forecasters.srf) {
        CounterRng rng(out.seed, /*stream=*/2);
        SRFOptions opts;
        opts.record_state_occupancy = config.forecasters.srf_state_occupancy;
        out.srf = run_srf(config.space, config.forecasters.srf_mu,
                          config.forecasters.srf_trial, out.stream, config.horizon, rng, opts);
    }
    return out;
}

void write_steps_csv(const ExperimentConfig& config, const ReplicationOutput& rep,
                     const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << "t,forecaster,forecast,x";
    for (std::size_t j = 0; j < config.space.schema.q(); ++j) f << ",b" << (j + 1);
    for (std::size_t j = 0; j < config.space.schema.r(); ++j) f << ",a" << (j + 1);
    f << "\n";
    auto emit = [&](const char* name, const std::vector<double>& forecasts) {
        for (std::size_t t = 0; t < forecasts.size(); ++t) {
            const ObservationVector& obs = rep.stream[t];
            f << (t + 1) << ',' << name << ',' << csv_number(forecasts[t]) << ',' << obs.x;
            for (int v : obs.b) f << ',' << v;
            for (int v : obs.a) f << ',' << v;
            f << "\n";
        }
    };
    if (rep.mixture) emit("mixture", rep.mixture->forecasts);
    if (rep.sr) emit("sr", rep.sr->forecasts);
    if (rep.srf) emit("srf", rep.srf->forecasts);
}

void write_posterior_csv(const ExperimentConfig& config, const MixtureRunRecord& mix,
                         const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << "t";
    for (const auto& m : config.space.models) f << ",alpha_" << m.id;
    f << "\n";
    for (std::size_t t = 0; t < mix.posterior_trajectory.size(); ++t) {
        f << (t + 1);
        for (double w : mix.posterior_trajectory[t]) f << ',' << csv_number(w);
        f << "\n";
    }
}

void write_sr_switches_csv(const ExperimentConfig& config, const SRRunRecord& sr,
                           const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << "t,from,to,log_score_diff\n";
    for (const auto& ev : sr.switches) {
        f << ev.t << ',' << config.space.models[ev.from].id << ','
          << config.space.models[ev.to].id << ',' << csv_number(ev.log_score_diff) << "\n";
    }
}

void write_srf_periods_csv(const ExperimentConfig& config, const SRFRunRecord& srf,
                           const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << "n,k,current,alternate,log_lambda_current,log_lambda_alternate,decision\n";
    for (const auto& row : srf.periods) {
        f << row.n << ',' << row.k << ',' << config.space.models[row.current].id << ','
          << config.space.models[row.alternate].id << ',' << csv_number(row.log_lambda_current)
          << ',' << csv_number(row.log_lambda_alternate) << ','
          << config.space.models[row.chosen].id << "\n";
    }
}

json occupancy_json(const ExperimentConfig& config, const SRFRunRecord& srf) {
    json pairs = json::array();
    for (const auto& [key, count] : srf.pair_occupancy) {
        pairs.push_back({{"current", config.space.models[key.first].id},
                         {"alternate", config.space.models[key.second].id},
                         {"periods", count}});
    }
    json doc{{"version", 1},
             {"pairs", pairs},
             {"discarded_tail_steps", srf.discarded_tail_steps}};
    if (!srf.state_occupancy.empty()) {
        json states = json::array();
        for (const auto& [key, count] : srf.state_occupancy) {
            states.push_back({{"data_code", key.data_code},
                              {"current", config.space.models[key.current].id},
                              {"alternate", config.space.models[key.alternate].id},
                              {"periods", count}});
        }
        doc["states"] = states;
    }
    return doc;
}

json score_report_json(const ExperimentConfig& config, const ReplicationOutput& rep) {
    json forecasters = json::object();
    auto add = [&](const char* name, const std::vector<double>& prob_assigned) {
        const auto report = log_score_report(prob_assigned);
        json deciles = json::array();
        const std::size_t n = report.per_step.size();
        for (std::size_t w = 0; w < 10 && n >= 10; ++w) {
            const std::size_t lo = w * n / 10;
            const std::size_t hi = (w + 1) * n / 10;
            double mean = 0.0;
            for (std::size_t i = lo; i < hi; ++i) mean += report.per_step[i];
            deciles.push_back(mean / static_cast<double>(hi - lo));
        }
        forecasters[name] = {{"U_T", report.average}, {"decile_means", deciles}};
    };
    if (rep.mixture) add("mixture", rep.mixture->prob_assigned);
    if (rep.sr) add("sr", rep.sr->prob_assigned);
    if (rep.srf && !rep.srf->prob_assigned.empty()) add("srf", rep.srf->prob_assigned);
    (void)config;
    return json{{"version", 1}, {"forecasters", forecasters}};
}

void write_json(const json& doc, const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << doc.dump(2) << "\n";
}

void write_replication_files(const ExperimentConfig& config, const ReplicationOutput& rep,
                             const fs::path& dir) {
    fs::create_directories(dir);
    write_steps_csv(config, rep, dir / "steps.csv");
    if (rep.mixture) write_posterior_csv(config, *rep.mixture, dir / "posterior.csv");
    if (rep.sr) write_sr_switches_csv(config, *rep.sr, dir / "sr_switches.csv");
    if (rep.srf) {
        write_srf_periods_csv(config, *rep.srf, dir / "srf_periods.csv");
        write_json(occupancy_json(config, *rep.srf), dir / "srf_occupancy.json");
    }
    write_json(score_report_json(config, rep), dir / "score_report.json");
}

std::vector<std::string> enabled_forecasters(const ExperimentConfig& config) {
    std::vector<std::string> names;
    if (config.forecasters.mixture) names.push_back("mixture");
    if (config.forecasters.sr) names.push_back("sr");
    if (config.forecasters.srf) names.push_back("srf");
    return names;
}

void write_summary(const ExperimentConfig& config, const ExperimentResult& result,
                   const fs::path& out) {
    json model_ids = json::array();
    for (const auto& m : config.space.models) model_ids.push_back(m.id);

    json u_t = json::object();
    for (const auto& name : enabled_forecasters(config)) u_t[name] = json::array();
    json final_posterior = json::array();

    for (const auto& rep : result.replications) {
        if (rep.mixture) {
            u_t["mixture"].push_back(log_score_average(rep.mixture->prob_assigned));
            final_posterior.push_back(rep.mixture->final_state.posterior);
        }
        if (rep.sr) u_t["sr"].push_back(log_score_average(rep.sr->prob_assigned));
        if (rep.srf && !rep.srf->prob_assigned.empty())
            u_t["srf"].push_back(log_score_average(rep.srf->prob_assigned));
    }
    json mean_u = json::object();
    for (auto& [name, values] : u_t.items()) {
        double mean = 0.0;
        for (const auto& v : values) mean += v.get<double>();
        mean_u[name] = values.empty() ? 0.0 : mean / values.size();
    }

    json doc{{"version", 1},
             {"horizon", config.horizon},
             {"replications", config.replications},
             {"seed", config.seed},
             {"forecasters", enabled_forecasters(config)},
             {"model_ids", model_ids},
             {"U_T", u_t},
             {"mean_U_T", mean_u}};
    if (config.forecasters.mixture) doc["final_posterior"] = final_posterior;
    write_json(doc, out);
}

void write_meta(const ExperimentConfig& config, const fs::path& out) {
    const auto now = std::chrono::system_clock::now();
    json doc{{"timestamp_unix",
              std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count()},
             {"rng", {{"name", CounterRng::kName}, {"version", CounterRng::kVersion}}},
             {"out_dir", config.out_dir}};
    write_json(doc, out);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, bool write_files, bool quiet) {
    config.validate();
    ExperimentResult result;
    result.replications.resize(config.replications);

    const std::size_t workers = std::min(thread_cap(), config.replications);
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::vector<std::string> errors;

    auto work = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= config.replications) return;
            try {
                result.replications[i] = run_replication(config, i);
                if (write_files) {
                    write_replication_files(config, result.replications[i],
                                            fs::path(config.out_dir) / rep_dir_name(i));
                }
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                errors.push_back(e.what());
                return;
            }
        }
    };

    if (write_files) fs::create_directories(config.out_dir);
    if (workers <= 1) {
        work();
    } else {
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (!errors.empty()) throw std::runtime_error(errors.front());

    if (write_files) {
        write_summary(config, result, fs::path(config.out_dir) / "summary.json");
        write_meta(config, fs::path(config.out_dir) / "meta.json");
    }
    if (!quiet) {
        std::cout << "completed " << config.replications << " replication(s), horizon "
                  << config.horizon << "\n";
    }
    return result;
}

StoredSteps read_steps_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty steps file: " + path);
    std::size_t n_b = 0;
    std::size_t n_a = 0;
    {
        std::istringstream hdr(line);
        std::string col;
        std::vector<std::string> cols;
        while (std::getline(hdr, col, ',')) cols.push_back(col);
        if (cols.size() < 4 || cols[0] != "t" || cols[1] != "forecaster" ||
            cols[2] != "forecast" || cols[3] != "x")
            throw std::runtime_error("unexpected steps header in " + path);
        for (std::size_t i = 4; i < cols.size(); ++i) {
            if (!cols[i].empty() && cols[i][0] == 'b')
                ++n_b;
            else
                ++n_a;
        }
    }
    StoredSteps out;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string tok;
        StepRow r;
        std::getline(row, tok, ',');
        r.t = static_cast<std::size_t>(std::stoull(tok));
        std::string name;
        std::getline(row, name, ',');
        std::getline(row, tok, ',');
        r.forecast = std::stod(tok);
        std::getline(row, tok, ',');
        r.x = std::stoi(tok);
        for (std::size_t j = 0; j < n_b; ++j) {
            std::getline(row, tok, ',');
            r.b.push_back(std::stoi(tok));
        }
        for (std::size_t j = 0; j < n_a; ++j) {
            std::getline(row, tok, ',');
            r.a.push_back(std::stoi(tok));
        }
        if (!out.rows.count(name)) out.forecasters.push_back(name);
        out.rows[name].push_back(std::move(r));
    }
    return out;
}

void score_stored_run(const std::string& run_dir, bool quiet) {
    std::ifstream sf(fs::path(run_dir) / "summary.json");
    if (!sf) throw std::runtime_error("cannot open summary.json under " + run_dir);
    json summary = json::parse(sf);
    const std::size_t horizon = summary.at("horizon").get<std::size_t>();
    const std::size_t replications = summary.at("replications").get<std::size_t>();

    for (std::size_t i = 0; i < replications; ++i) {
        const fs::path dir = fs::path(run_dir) / rep_dir_name(i);
        const StoredSteps steps = read_steps_csv((dir / "steps.csv").string());
        json forecasters = json::object();
        for (const auto& name : steps.forecasters) {
            const auto& rows = steps.rows.at(name);
            // srf may legitimately score fewer steps only if steps were not
            // recorded at all; a stored series must cover the whole horizon
            if (rows.size() != horizon)
                throw std::runtime_error("row count mismatch for forecaster '" + name +
                                         "' in " + dir.string() + ": expected " +
                                         std::to_string(horizon) + ", found " +
                                         std::to_string(rows.size()));
            std::vector<double> prob_assigned;
            prob_assigned.reserve(rows.size());
            for (std::size_t t = 0; t < rows.size(); ++t) {
                if (rows[t].t != t + 1)
                    throw std::runtime_error("non-contiguous step index in " + dir.string());
                prob_assigned.push_back(rows[t].x == 1 ? rows[t].forecast
                                                       : 1.0 - rows[t].forecast);
            }
            forecasters[name] = {{"U_T", log_score_average(prob_assigned)}};
            if (!quiet)
                std::cout << rep_dir_name(i) << " " << name << " U_T = "
                          << csv_number(forecasters[name]["U_T"].get<double>()) << "\n";
        }
        write_json(json{{"version", 1}, {"forecasters", forecasters}},
                   dir / "score_report_recomputed.json");
    }
}

void compare_stored_run(const std::string& run_dir, std::size_t replication,
                        const std::string& forecaster_a, const std::string& forecaster_b,
                        const std::optional<ExperimentConfig>& config, bool quiet) {
    const fs::path dir = fs::path(run_dir) / rep_dir_name(replication);
    const StoredSteps steps = read_steps_csv((dir / "steps.csv").string());
    for (const auto& name : {forecaster_a, forecaster_b}) {
        if (!steps.rows.count(name))
            throw std::runtime_error("forecaster '" + name + "' not present in " +
                                     dir.string());
    }
    const auto& rows_a = steps.rows.at(forecaster_a);
    const auto& rows_b = steps.rows.at(forecaster_b);
    if (rows_a.size() != rows_b.size())
        throw std::runtime_error("stored forecaster series lengths differ");

    const fs::path gap_path = dir / ("gap_" + forecaster_a + "_" + forecaster_b + ".csv");
    {
        std::ofstream f(gap_path);
        f << "t,value\n";
        for (std::size_t i = 0; i < rows_a.size(); ++i)
            f << rows_a[i].t << ',' << csv_number(std::abs(rows_a[i].forecast - rows_b[i].forecast))
              << "\n";
    }
    if (config) {
        const fs::path ratio_path = dir / ("truth_ratio_" + forecaster_a + ".csv");
        std::ofstream f(ratio_path);
        f << "t,value\n";
        for (const auto& r : rows_a) {
            const double p_truth = config->generator.p_x_given_b(r.b);
            const double assigned_truth = r.x == 1 ? p_truth : 1.0 - p_truth;
            const double assigned = r.x == 1 ? r.forecast : 1.0 - r.forecast;
            f << r.t << ',' << csv_number(assigned / assigned_truth) << "\n";
        }
    }
    if (!quiet) std::cout << "wrote " << gap_path.string() << "\n";
}

void run_chain_report(const ExperimentConfig& config, const std::vector<std::size_t>& ks,
                      const std::string& out_dir, bool quiet) {
    if (ks.empty()) throw std::invalid_argument("at least one trial length required");
    ChainInstance base{config.space, config.generator, ks.front(),
                       config.forecasters.srf_mu, 1000000};

    ChainModel chain = build_transition_matrix(base);
    const auto irr = check_irreducible(chain.transition);
    chain.stationary = stationary_distribution(chain.transition);
    assign_partition(chain);

    double max_pi = 0.0;
    for (double w : chain.stationary) max_pi = std::max(max_pi, w);
    const double residual = balance_residual(chain, chain.in_correct_set);

    const auto sweep = sweep_k(base, ks);
    json sweep_json = json::array();
    for (const auto& row : sweep)
        sweep_json.push_back(
            {{"k", row.k}, {"pi_correct", row.pi_correct}, {"states", row.state_count}});

    json doc{{"version", 1},
             {"k", base.k},
             {"state_count", chain.states.size()},
             {"irreducible", irr.irreducible},
             {"pi_max", max_pi},
             {"pi_correct", pi_correct_mass(chain)},
             {"balance_residual", residual},
             {"k_sweep", sweep_json}};

    fs::create_directories(out_dir);
    write_json(doc, fs::path(out_dir) / "chain_report.json");
    {
        std::ofstream f(fs::path(out_dir) / "ksweep.csv");
        f << "k,pi_correct,state_count\n";
        for (const auto& row : sweep)
            f << row.k << ',' << csv_number(row.pi_correct) << ',' << row.state_count << "\n";
    }
    if (!quiet)
        std::cout << "chain: " << chain.states.size() << " states, pi(C) = "
                  << csv_number(pi_correct_mass(chain)) << "\n";
}

}  // namespace bbayes
