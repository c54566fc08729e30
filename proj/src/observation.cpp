#include "bbayes/observation.hpp"

#include <stdexcept>
#include <string>

namespace bbayes {

void Schema::validate() const {
    for (int n : b_alphabets)
        if (n < 2) throw std::invalid_argument("pre-outcome alphabet size must be >= 2");
    for (int n : a_alphabets)
        if (n < 2) throw std::invalid_argument("post-outcome alphabet size must be >= 2");
}

long long Schema::symbol_count() const {
    long long m = 2;  // the binary outcome
    for (int n : b_alphabets) m *= n;
    for (int n : a_alphabets) m *= n;
    return m;
}

void validate_pre_outcome(const Schema& schema, const std::vector<int>& b) {
    if (b.size() != schema.q())
        throw std::invalid_argument("pre-outcome vector length does not match schema");
    for (std::size_t j = 0; j < b.size(); ++j)
        if (b[j] < 0 || b[j] >= schema.b_alphabets[j])
            throw std::invalid_argument("pre-outcome value outside alphabet at index " +
                                        std::to_string(j));
}

void validate_observation(const Schema& schema, const ObservationVector& obs) {
    validate_pre_outcome(schema, obs.b);
    if (obs.x != 0 && obs.x != 1)
        throw std::invalid_argument("outcome indicator must be 0 or 1");
    if (obs.a.size() != schema.r())
        throw std::invalid_argument("post-outcome vector length does not match schema");
    for (std::size_t j = 0; j < obs.a.size(); ++j)
        if (obs.a[j] < 0 || obs.a[j] >= schema.a_alphabets[j])
            throw std::invalid_argument("post-outcome value outside alphabet at index " +
                                        std::to_string(j));
}

long long encode_symbol(const Schema& schema, const ObservationVector& obs) {
    validate_observation(schema, obs);
    long long code = 0;
    for (std::size_t j = 0; j < schema.q(); ++j)
        code = code * schema.b_alphabets[j] + obs.b[j];
    code = code * 2 + obs.x;
    for (std::size_t j = 0; j < schema.r(); ++j)
        code = code * schema.a_alphabets[j] + obs.a[j];
    return code;
}

ObservationVector decode_symbol(const Schema& schema, long long code) {
    if (code < 0 || code >= schema.symbol_count())
        throw std::invalid_argument("symbol code out of range");
    ObservationVector obs;
    obs.a.resize(schema.r());
    for (std::size_t j = schema.r(); j-- > 0;) {
        obs.a[j] = static_cast<int>(code % schema.a_alphabets[j]);
        code /= schema.a_alphabets[j];
    }
    obs.x = static_cast<int>(code % 2);
    code /= 2;
    obs.b.resize(schema.q());
    for (std::size_t j = schema.q(); j-- > 0;) {
        obs.b[j] = static_cast<int>(code % schema.b_alphabets[j]);
        code /= schema.b_alphabets[j];
    }
    return obs;
}

const ObservationVector& Trace::at(std::size_t t) const {
    if (t < 1 || t > records_.size()) throw std::out_of_range("trace index out of range");
    return records_[t - 1];
}

void Trace::append(ObservationVector obs) {
    validate_observation(schema_, obs);
    records_.push_back(std::move(obs));
}

}  // namespace bbayes
