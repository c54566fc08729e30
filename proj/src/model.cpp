#include "bbayes/model.hpp"

#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>

namespace bbayes {

const ModelState::Counts ModelState::kEmpty{};

std::uint32_t ModelSpec::structure_mask() const {
    if (family == ModelFamily::FixedBernoulli) return 0;
    std::uint32_t mask = 0;
    for (int d : deps) mask |= (1u << d);
    return mask;
}

void ModelSpec::validate(const Schema& schema) const {
    if (id.empty()) throw std::invalid_argument("model id must be non-empty");
    switch (family) {
        case ModelFamily::FixedBernoulli:
            if (!(theta > 0.0 && theta < 1.0))
                throw std::invalid_argument("fixed-bernoulli theta must lie in (0,1): " + id);
            break;
        case ModelFamily::Cpt: {
            if (!(pseudo_count > 0.0))
                throw std::invalid_argument("cpt pseudo-count must be positive: " + id);
            std::set<int> seen;
            for (int d : deps) {
                if (d < 0 || d >= static_cast<int>(schema.q()))
                    throw std::invalid_argument("cpt dependency index out of range: " + id);
                if (!seen.insert(d).second)
                    throw std::invalid_argument("cpt dependency repeated: " + id);
            }
            break;
        }
    }
}

int hamming_distance(std::uint32_t a, std::uint32_t b) {
    return std::popcount(a ^ b);
}

const ModelState::Counts& ModelState::counts_for(long long context) const {
    auto it = table_.find(context);
    return it == table_.end() ? kEmpty : it->second;
}

void ModelState::add(long long context, int x) {
    auto& c = table_[context];
    if (x == 1)
        ++c.ones;
    else
        ++c.zeros;
    ++total_;
}

long long context_key(const ModelSpec& spec, const Schema& schema, const std::vector<int>& b) {
    long long key = 0;
    for (int d : spec.deps) key = key * schema.b_alphabets[d] + b[d];
    return key;
}

double predict(const ModelState& state, const ModelSpec& spec, const Schema& schema,
               const std::vector<int>& b) {
    validate_pre_outcome(schema, b);
    if (spec.family == ModelFamily::FixedBernoulli) return spec.theta;
    const auto& c = state.counts_for(context_key(spec, schema, b));
    const double pc = spec.pseudo_count;
    return (static_cast<double>(c.ones) + pc) /
           (static_cast<double>(c.ones + c.zeros) + 2.0 * pc);
}

void update_model(ModelState& state, const ModelSpec& spec, const Schema& schema,
                  const ObservationVector& obs) {
    validate_observation(schema, obs);
    if (spec.family == ModelFamily::FixedBernoulli) return;
    state.add(context_key(spec, schema, obs.b), obs.x);
}

double log_likelihood_increment(const ModelState& state, const ModelSpec& spec,
                                const Schema& schema, const ObservationVector& obs) {
    const double p = predict(state, spec, schema, obs.b);
    return obs.x == 1 ? std::log(p) : std::log1p(-p);
}

std::size_t ModelSpace::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < models.size(); ++i)
        if (models[i].id == id) return i;
    throw std::invalid_argument("unknown model id: " + id);
}

ModelSpace build_model_space(Schema schema, std::vector<ModelSpec> specs,
                             std::vector<double> priors) {
    schema.validate();
    if (specs.empty()) throw std::invalid_argument("model space must contain at least one model");
    if (priors.size() != specs.size())
        throw std::invalid_argument("prior count does not match model count");
    std::set<std::string> ids;
    double total = 0.0;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        specs[i].validate(schema);
        if (!ids.insert(specs[i].id).second)
            throw std::invalid_argument("duplicate model id: " + specs[i].id);
        if (!(priors[i] > 0.0))
            throw std::invalid_argument("prior weight must be strictly positive: " + specs[i].id);
        total += priors[i];
    }
    for (double& p : priors) p /= total;
    return ModelSpace{std::move(schema), std::move(specs), std::move(priors)};
}

}  // namespace bbayes
