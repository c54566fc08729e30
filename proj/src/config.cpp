#include "bbayes/config.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bbayes {

namespace {

struct Section {
    std::string name;
    std::map<std::string, std::string> entries;
    std::map<std::string, bool> used;
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<Section> tokenize(const std::string& text) {
    std::vector<Section> sections;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": malformed section header");
            sections.push_back(Section{trim(t.substr(1, t.size() - 2)), {}, {}});
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        if (sections.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": key outside any section");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (!sections.back().entries.emplace(key, value).second)
            throw std::invalid_argument("config: duplicate key '" + key + "' in [" +
                                        sections.back().name + "]");
    }
    return sections;
}

class SectionReader {
  public:
    explicit SectionReader(Section& s) : s_(s) {}

    bool has(const std::string& key) const { return s_.entries.count(key) > 0; }

    std::string str(const std::string& key) {
        auto it = s_.entries.find(key);
        if (it == s_.entries.end())
            throw std::invalid_argument("config: missing key '" + key + "' in [" + s_.name +
                                        "]");
        s_.used[key] = true;
        return it->second;
    }

    std::string str_or(const std::string& key, const std::string& fallback) {
        return has(key) ? str(key) : fallback;
    }

    double number(const std::string& key) {
        const std::string v = str(key);
        std::size_t pos = 0;
        double out;
        try {
            out = std::stod(v, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("config: key '" + key + "' is not a number: " + v);
        }
        if (pos != v.size())
            throw std::invalid_argument("config: key '" + key + "' is not a number: " + v);
        return out;
    }

    double number_or(const std::string& key, double fallback) {
        return has(key) ? number(key) : fallback;
    }

    long long integer(const std::string& key) {
        const double v = number(key);
        const long long i = static_cast<long long>(v);
        if (static_cast<double>(i) != v)
            throw std::invalid_argument("config: key '" + key + "' must be an integer");
        return i;
    }

    long long integer_or(const std::string& key, long long fallback) {
        return has(key) ? integer(key) : fallback;
    }

    bool flag_or(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const std::string v = str(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw std::invalid_argument("config: key '" + key + "' must be a boolean");
    }

    std::vector<int> int_list_or(const std::string& key) {
        std::vector<int> out;
        if (!has(key)) return out;
        const std::string v = str(key);
        std::istringstream in(v);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            tok = trim(tok);
            if (tok.empty()) continue;
            out.push_back(std::stoi(tok));
        }
        return out;
    }

    std::vector<double> double_list_or(const std::string& key) {
        std::vector<double> out;
        if (!has(key)) return out;
        const std::string v = str(key);
        std::istringstream in(v);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            tok = trim(tok);
            if (tok.empty()) continue;
            out.push_back(std::stod(tok));
        }
        return out;
    }

    void check_exhausted() const {
        for (const auto& [key, value] : s_.entries) {
            (void)value;
            if (!s_.used.count(key))
                throw std::invalid_argument("config: unknown key '" + key + "' in [" + s_.name +
                                            "]");
        }
    }

  private:
    Section& s_;
};

SearchDistribution parse_mu(SectionReader& r, const std::string& prefix) {
    SearchDistribution mu;
    const std::string kind = r.str_or(prefix + "_mu", "uniform");
    if (kind == "uniform") {
        mu.kind = SearchKind::Uniform;
    } else if (kind == "prior") {
        mu.kind = SearchKind::PriorProportional;
    } else if (kind == "neighborhood") {
        mu.kind = SearchKind::Neighborhood;
    } else {
        throw std::invalid_argument("config: unknown search kind '" + kind + "'");
    }
    mu.temperature = r.number_or(prefix + "_temperature", 1.0);
    mu.uniform_floor = r.number_or(prefix + "_uniform_floor", 0.01);
    return mu;
}

}  // namespace

void ExperimentConfig::validate() const {
    generator.validate();
    if (horizon < 1) throw std::invalid_argument("config: horizon must be >= 1");
    if (replications < 1) throw std::invalid_argument("config: replications must be >= 1");
    if (!(forecasters.mixture || forecasters.sr || forecasters.srf))
        throw std::invalid_argument("config: at least one forecaster must be enabled");
    if (forecasters.sr) forecasters.sr_mu.validate();
    if (forecasters.srf) {
        forecasters.srf_mu.validate();
        forecasters.srf_trial.validate();
    }
}

ExperimentConfig parse_config_text(const std::string& text) {
    auto sections = tokenize(text);

    Schema schema;
    std::vector<ModelSpec> specs;
    std::vector<double> priors;
    GeneratorSpec gen;
    ForecasterSettings fc;
    std::size_t horizon = 0;
    std::size_t replications = 1;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    bool saw_schema = false;
    bool saw_generator = false;
    bool saw_run = false;

    for (auto& section : sections) {
        SectionReader r(section);
        if (section.name == "schema") {
            saw_schema = true;
            schema.b_alphabets = r.int_list_or("b_alphabets");
            schema.a_alphabets = r.int_list_or("a_alphabets");
        } else if (section.name == "models") {
            ModelSpec spec;
            spec.id = r.str("id");
            const std::string family = r.str("family");
            if (family == "fixed-bernoulli") {
                spec.family = ModelFamily::FixedBernoulli;
                spec.theta = r.number("theta");
            } else if (family == "cpt") {
                spec.family = ModelFamily::Cpt;
                spec.deps = r.int_list_or("deps");
                spec.pseudo_count = r.number_or("pseudo_count", 1.0);
            } else {
                throw std::invalid_argument("config: unknown model family '" + family + "'");
            }
            priors.push_back(r.number("prior"));
            specs.push_back(std::move(spec));
        } else if (section.name == "generator") {
            saw_generator = true;
            const std::string kind = r.str("kind");
            if (kind == "bernoulli") {
                gen.kind = GeneratorKind::Bernoulli;
                gen.theta = r.number("theta");
            } else if (kind == "table") {
                gen.kind = GeneratorKind::Table;
                gen.deps = r.int_list_or("deps");
                gen.table_probs = r.double_list_or("probs");
            } else if (kind == "parity") {
                gen.kind = GeneratorKind::Parity;
                gen.parity_i = static_cast<int>(r.integer_or("parity_i", 0));
                gen.parity_j = static_cast<int>(r.integer_or("parity_j", 1));
                gen.p_odd = r.number_or("p_odd", 0.9);
                gen.p_even = r.number_or("p_even", 0.1);
            } else {
                throw std::invalid_argument("config: unknown generator kind '" + kind + "'");
            }
            if (r.has("truth_id")) gen.truth_id = r.str("truth_id");
        } else if (section.name == "forecasters") {
            fc.mixture = r.flag_or("mixture", false);
            fc.sr = r.flag_or("sr", false);
            if (fc.sr || r.has("sr_mu")) fc.sr_mu = parse_mu(r, "sr");
            fc.srf = r.flag_or("srf", false);
            if (fc.srf || r.has("srf_mu")) {
                fc.srf_mu = parse_mu(r, "srf");
                const std::string sched = r.str_or("srf_schedule", "fixed");
                if (sched == "fixed") {
                    fc.srf_trial.schedule = TrialSchedule::Fixed;
                    fc.srf_trial.k = static_cast<std::size_t>(r.integer_or("srf_k", 1));
                } else if (sched == "geometric") {
                    fc.srf_trial.schedule = TrialSchedule::Geometric;
                    fc.srf_trial.k0 = static_cast<std::size_t>(r.integer_or("srf_k0", 1));
                    fc.srf_trial.growth = r.number_or("srf_growth", 1.5);
                    fc.srf_trial.cap = static_cast<std::size_t>(r.integer_or("srf_cap", 256));
                } else {
                    throw std::invalid_argument("config: unknown trial schedule '" + sched + "'");
                }
                fc.srf_state_occupancy = r.flag_or("srf_state_occupancy", false);
            }
        } else if (section.name == "run") {
            saw_run = true;
            horizon = static_cast<std::size_t>(r.integer("horizon"));
            replications = static_cast<std::size_t>(r.integer_or("replications", 1));
            seed = static_cast<std::uint64_t>(r.integer_or("seed", 1));
            out_dir = r.str_or("out", "out");
        } else {
            throw std::invalid_argument("config: unknown section [" + section.name + "]");
        }
        r.check_exhausted();
    }

    if (!saw_schema) throw std::invalid_argument("config: missing [schema] section");
    if (specs.empty()) throw std::invalid_argument("config: no [models] sections");
    if (!saw_generator) throw std::invalid_argument("config: missing [generator] section");
    if (!saw_run) throw std::invalid_argument("config: missing [run] section");

    gen.schema = schema;
    ExperimentConfig cfg;
    cfg.space = build_model_space(schema, std::move(specs), std::move(priors));
    cfg.generator = std::move(gen);
    cfg.forecasters = std::move(fc);
    cfg.horizon = horizon;
    cfg.replications = replications;
    cfg.seed = seed;
    cfg.out_dir = std::move(out_dir);
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace bbayes
