#ifndef BBAYES_OBSERVATION_HPP
#define BBAYES_OBSERVATION_HPP

#include <cstddef>
#include <vector>

namespace bbayes {

// Declares the shape of one observation vector: q categorical pre-outcome
// variables, the binary outcome, and r categorical post-outcome variables.
struct Schema {
    std::vector<int> b_alphabets;  // alphabet size per pre-outcome variable
    std::vector<int> a_alphabets;  // alphabet size per post-outcome variable

    std::size_t q() const { return b_alphabets.size(); }
    std::size_t r() const { return a_alphabets.size(); }

    // number of distinct full observation vectors
    long long symbol_count() const;

    void validate() const;
};

struct ObservationVector {
    std::vector<int> b;
    int x = 0;  // outcome indicator, 0 or 1
    std::vector<int> a;
};

void validate_pre_outcome(const Schema& schema, const std::vector<int>& b);
void validate_observation(const Schema& schema, const ObservationVector& obs);

// Mixed-radix encoding of a full observation vector into [0, symbol_count).
long long encode_symbol(const Schema& schema, const ObservationVector& obs);
ObservationVector decode_symbol(const Schema& schema, long long code);

// Append-only history of observation vectors, index origin t = 1.
class Trace {
  public:
    explicit Trace(Schema schema) : schema_(std::move(schema)) { schema_.validate(); }

    const Schema& schema() const { return schema_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    const ObservationVector& at(std::size_t t) const;  // 1-based
    const std::vector<ObservationVector>& records() const { return records_; }

    void append(ObservationVector obs);

  private:
    Schema schema_;
    std::vector<ObservationVector> records_;
};

}  // namespace bbayes

#endif  // BBAYES_OBSERVATION_HPP
