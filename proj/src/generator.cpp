#include "bbayes/generator.hpp"

#include <stdexcept>

namespace bbayes {

namespace {

long long table_context(const GeneratorSpec& spec, const std::vector<int>& b) {
    long long key = 0;
    for (int d : spec.deps) key = key * spec.schema.b_alphabets[d] + b[d];
    return key;
}

void check_prob(double p, const char* what) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument(std::string(what) + " must lie in the open interval (0,1)");
}

}  // namespace

void GeneratorSpec::validate() const {
    schema.validate();
    switch (kind) {
        case GeneratorKind::Bernoulli:
            check_prob(theta, "generator theta");
            break;
        case GeneratorKind::Table: {
            long long contexts = 1;
            for (int d : deps) {
                if (d < 0 || d >= static_cast<int>(schema.q()))
                    throw std::invalid_argument("generator table dependency out of range");
                contexts *= schema.b_alphabets[d];
            }
            if (static_cast<long long>(table_probs.size()) != contexts)
                throw std::invalid_argument("generator table size does not match context count");
            for (double p : table_probs) check_prob(p, "generator table entry");
            break;
        }
        case GeneratorKind::Parity:
            if (parity_i < 0 || parity_j < 0 || parity_i >= static_cast<int>(schema.q()) ||
                parity_j >= static_cast<int>(schema.q()) || parity_i == parity_j)
                throw std::invalid_argument("parity generator needs two distinct b indices");
            if (schema.b_alphabets[parity_i] != 2 || schema.b_alphabets[parity_j] != 2)
                throw std::invalid_argument("parity generator requires binary b variables");
            check_prob(p_odd, "parity p_odd");
            check_prob(p_even, "parity p_even");
            break;
    }
}

double GeneratorSpec::p_x_given_b(const std::vector<int>& b) const {
    validate_pre_outcome(schema, b);
    switch (kind) {
        case GeneratorKind::Bernoulli:
            return theta;
        case GeneratorKind::Table:
            return table_probs[static_cast<std::size_t>(table_context(*this, b))];
        case GeneratorKind::Parity:
            return ((b[parity_i] ^ b[parity_j]) == 1) ? p_odd : p_even;
    }
    throw std::logic_error("unreachable generator kind");
}

double GeneratorSpec::symbol_prob(const ObservationVector& obs) const {
    validate_observation(schema, obs);
    double p = 1.0;
    for (std::size_t j = 0; j < schema.q(); ++j) p /= schema.b_alphabets[j];
    const double px = p_x_given_b(obs.b);
    p *= (obs.x == 1 ? px : 1.0 - px);
    for (std::size_t j = 0; j < schema.r(); ++j) p /= schema.a_alphabets[j];
    return p;
}

ObservationVector GeneratorSpec::sample(CounterRng& rng) const {
    ObservationVector obs;
    obs.b.resize(schema.q());
    for (std::size_t j = 0; j < schema.q(); ++j)
        obs.b[j] = static_cast<int>(rng.next_below(static_cast<std::size_t>(schema.b_alphabets[j])));
    obs.x = rng.next_bernoulli(p_x_given_b(obs.b)) ? 1 : 0;
    obs.a.resize(schema.r());
    for (std::size_t j = 0; j < schema.r(); ++j)
        obs.a[j] = static_cast<int>(rng.next_below(static_cast<std::size_t>(schema.a_alphabets[j])));
    return obs;
}

std::vector<ObservationVector> generate_stream(const GeneratorSpec& spec, std::uint64_t seed,
                                               std::size_t horizon) {
    spec.validate();
    CounterRng rng(seed, /*stream=*/0);
    std::vector<ObservationVector> out;
    out.reserve(horizon);
    for (std::size_t t = 0; t < horizon; ++t) out.push_back(spec.sample(rng));
    return out;
}

std::vector<std::pair<std::vector<int>, double>> enumerate_contexts(const Schema& schema) {
    std::vector<std::pair<std::vector<int>, double>> out;
    long long total = 1;
    for (int n : schema.b_alphabets) total *= n;
    for (long long code = 0; code < total; ++code) {
        std::vector<int> b(schema.q());
        long long rem = code;
        for (std::size_t j = schema.q(); j-- > 0;) {
            b[j] = static_cast<int>(rem % schema.b_alphabets[j]);
            rem /= schema.b_alphabets[j];
        }
        out.emplace_back(std::move(b), 1.0 / static_cast<double>(total));
    }
    return out;
}

}  // namespace bbayes
