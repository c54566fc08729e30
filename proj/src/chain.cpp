#include "bbayes/chain.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace bbayes {

namespace {

std::size_t state_index(long long data_code, std::size_t current, std::size_t alternate,
                        std::size_t n_models) {
    return static_cast<std::size_t>((data_code * static_cast<long long>(n_models) +
                                     static_cast<long long>(current)) *
                                        static_cast<long long>(n_models) +
                                    static_cast<long long>(alternate));
}

long long ipow(long long base, std::size_t exp) {
    long long r = 1;
    for (std::size_t i = 0; i < exp; ++i) r *= base;
    return r;
}

std::vector<ObservationVector> decode_block(const Schema& schema, long long data_code,
                                            std::size_t k) {
    const long long base = schema.symbol_count();
    std::vector<ObservationVector> block;
    block.reserve(k);
    for (std::size_t s = 0; s < k; ++s) {
        block.push_back(decode_symbol(schema, data_code % base));
        data_code /= base;
    }
    return block;
}

}  // namespace

void ChainInstance::validate() const {
    generator.validate();
    mu.validate();
    if (k < 1) throw std::invalid_argument("trial length must be >= 1");
    for (const auto& m : space.models)
        if (m.family != ModelFamily::FixedBernoulli)
            throw std::invalid_argument(
                "chain analysis requires stateless (fixed-bernoulli) model families");
    if (state_count() > static_cast<long long>(state_ceiling))
        throw std::invalid_argument("enumerated state count exceeds the configured ceiling");
}

long long ChainInstance::state_count() const {
    const long long n = static_cast<long long>(space.size());
    return ipow(space.schema.symbol_count(), k) * n * n;
}

std::vector<ChainState> enumerate_states(const ChainInstance& instance) {
    instance.validate();
    const long long blocks = ipow(instance.space.schema.symbol_count(), instance.k);
    const std::size_t n = instance.space.size();
    std::vector<ChainState> states;
    states.reserve(static_cast<std::size_t>(instance.state_count()));
    for (long long d = 0; d < blocks; ++d)
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t a = 0; a < n; ++a) states.push_back(ChainState{d, c, a});
    return states;
}

ChainModel build_transition_matrix(const ChainInstance& instance) {
    ChainModel chain;
    chain.instance = instance;
    chain.states = enumerate_states(instance);
    const std::size_t n_models = instance.space.size();
    const Schema& schema = instance.space.schema;
    const long long base = schema.symbol_count();
    const long long blocks = ipow(base, instance.k);

    // probability of each full symbol under the iid generator
    std::vector<double> sym_prob(static_cast<std::size_t>(base));
    for (long long s = 0; s < base; ++s)
        sym_prob[static_cast<std::size_t>(s)] =
            instance.generator.symbol_prob(decode_symbol(schema, s));

    // probability of each whole period block
    std::vector<double> block_prob(static_cast<std::size_t>(blocks), 1.0);
    for (long long d = 0; d < blocks; ++d) {
        long long rem = d;
        for (std::size_t s = 0; s < instance.k; ++s) {
            block_prob[static_cast<std::size_t>(d)] *=
                sym_prob[static_cast<std::size_t>(rem % base)];
            rem /= base;
        }
    }

    const std::size_t n_states = chain.states.size();
    chain.transition.assign(n_states, std::vector<double>(n_states, 0.0));
    for (std::size_t si = 0; si < n_states; ++si) {
        const ChainState& s = chain.states[si];
        const auto block = decode_block(schema, s.data_code, instance.k);
        const double ll_c =
            trial_log_likelihood(instance.space.models[s.current], schema, block);
        const double ll_a =
            trial_log_likelihood(instance.space.models[s.alternate], schema, block);
        const std::size_t next_current =
            srf_decide(s.current, s.alternate, ll_c, ll_a, instance.space);
        const auto mu = instance.mu.probabilities(instance.space, next_current);
        for (long long d = 0; d < blocks; ++d) {
            const double pd = block_prob[static_cast<std::size_t>(d)];
            for (std::size_t a = 0; a < n_models; ++a) {
                chain.transition[si][state_index(d, next_current, a, n_models)] += pd * mu[a];
            }
        }
    }
    return chain;
}

double expected_log_score(const ModelSpec& spec, const GeneratorSpec& gen) {
    const auto contexts = enumerate_contexts(gen.schema);
    if (spec.family == ModelFamily::FixedBernoulli) {
        double score = 0.0;
        for (const auto& [b, pb] : contexts) {
            const double p = gen.p_x_given_b(b);
            score += pb * (p * std::log(spec.theta) + (1.0 - p) * std::log1p(-spec.theta));
        }
        return score;
    }
    // cpt: the asymptotic prediction in each dependency context is the
    // generator's conditional outcome probability averaged over that context
    std::map<long long, std::pair<double, double>> agg;  // key -> (mass, mass * p)
    for (const auto& [b, pb] : contexts) {
        const long long key = context_key(spec, gen.schema, b);
        agg[key].first += pb;
        agg[key].second += pb * gen.p_x_given_b(b);
    }
    double score = 0.0;
    for (const auto& [b, pb] : contexts) {
        const auto& [mass, weighted] = agg.at(context_key(spec, gen.schema, b));
        const double phat = weighted / mass;
        const double p = gen.p_x_given_b(b);
        score += pb * (p * std::log(phat) + (1.0 - p) * std::log1p(-phat));
    }
    return score;
}

void assign_partition(ChainModel& chain) {
    std::vector<double> scores;
    scores.reserve(chain.instance.space.size());
    double best = -1e300;
    for (const auto& m : chain.instance.space.models) {
        scores.push_back(expected_log_score(m, chain.instance.generator));
        best = std::max(best, scores.back());
    }
    chain.in_correct_set.assign(chain.states.size(), false);
    for (std::size_t i = 0; i < chain.states.size(); ++i)
        chain.in_correct_set[i] = scores[chain.states[i].current] >= best - 1e-9;
}

namespace {

std::vector<bool> reachable(const std::vector<std::vector<double>>& m, bool reverse) {
    const std::size_t n = m.size();
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v = 0; v < n; ++v) {
            const double p = reverse ? m[v][u] : m[u][v];
            if (p > 0.0 && !seen[v]) {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    return seen;
}

}  // namespace

IrreducibilityReport check_irreducible(const std::vector<std::vector<double>>& matrix) {
    IrreducibilityReport rep;
    const auto fwd = reachable(matrix, false);
    const auto bwd = reachable(matrix, true);
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        if (!fwd[i]) rep.unreachable.push_back(i);
        if (!bwd[i]) rep.non_returning.push_back(i);
    }
    rep.irreducible = rep.unreachable.empty() && rep.non_returning.empty();
    return rep;
}

std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& matrix) {
    const std::size_t n = matrix.size();
    if (n == 0) throw std::invalid_argument("empty transition matrix");
    const auto rep = check_irreducible(matrix);
    if (!rep.irreducible)
        throw std::runtime_error("transition matrix is not irreducible (" +
                                 std::to_string(rep.unreachable.size()) + " unreachable, " +
                                 std::to_string(rep.non_returning.size()) +
                                 " non-returning states)");
    std::vector<double> pi(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    for (std::size_t iter = 0; iter < 1000000; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double w = pi[i];
            if (w == 0.0) continue;
            const auto& row = matrix[i];
            for (std::size_t j = 0; j < n; ++j) next[j] += w * row[j];
        }
        double residual = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            residual = std::max(residual, std::abs(next[j] - pi[j]));
        // lazy-chain step: same fixed point, guaranteed aperiodic
        for (std::size_t j = 0; j < n; ++j) pi[j] = 0.5 * (pi[j] + next[j]);
        if (residual < 1e-12) break;
    }
    double total = 0.0;
    for (double w : pi) total += w;
    for (double& w : pi) w /= total;
    return pi;
}

double balance_residual(const ChainModel& chain, const std::vector<bool>& cut) {
    if (cut.size() != chain.states.size())
        throw std::invalid_argument("cut mask size does not match state count");
    bool any_in = false;
    bool any_out = false;
    for (bool c : cut) (c ? any_in : any_out) = true;
    if (!any_in || !any_out)
        throw std::invalid_argument("degenerate cut: one side of the partition is empty");
    double out_flow = 0.0;
    double in_flow = 0.0;
    for (std::size_t s = 0; s < cut.size(); ++s) {
        if (!cut[s]) continue;
        for (std::size_t t = 0; t < cut.size(); ++t) {
            if (cut[t]) continue;
            out_flow += chain.stationary[s] * chain.transition[s][t];
            in_flow += chain.stationary[t] * chain.transition[t][s];
        }
    }
    return std::abs(out_flow - in_flow);
}

double pi_correct_mass(const ChainModel& chain) {
    double mass = 0.0;
    for (std::size_t i = 0; i < chain.states.size(); ++i)
        if (chain.in_correct_set[i]) mass += chain.stationary[i];
    return mass;
}

double occupancy_compare(const ChainModel& chain,
                         const std::map<OccupancyKey, long long>& counts, std::size_t run_k) {
    if (run_k != chain.instance.k)
        throw std::invalid_argument("trial length of the run does not match the chain instance");
    const std::size_t n_models = chain.instance.space.size();
    std::vector<double> freq(chain.states.size(), 0.0);
    long long total = 0;
    for (const auto& [key, c] : counts) total += c;
    if (total == 0) throw std::invalid_argument("empty occupancy counts");
    for (const auto& [key, c] : counts) {
        const std::size_t idx = state_index(key.data_code, key.current, key.alternate, n_models);
        if (idx >= freq.size())
            throw std::invalid_argument("occupancy key outside the enumerated state space");
        freq[idx] = static_cast<double>(c) / static_cast<double>(total);
    }
    double tv = 0.0;
    for (std::size_t i = 0; i < freq.size(); ++i)
        tv += std::abs(freq[i] - chain.stationary[i]);
    return 0.5 * tv;
}

std::vector<KSweepRow> sweep_k(const ChainInstance& base, const std::vector<std::size_t>& ks) {
    std::vector<KSweepRow> rows;
    for (std::size_t k : ks) {
        ChainInstance inst = base;
        inst.k = k;
        ChainModel chain = build_transition_matrix(inst);
        chain.stationary = stationary_distribution(chain.transition);
        assign_partition(chain);
        rows.push_back(KSweepRow{k, pi_correct_mass(chain), inst.state_count()});
    }
    return rows;
}

}  // namespace bbayes
