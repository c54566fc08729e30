#include <doctest.h>

#include <cmath>
#include <random>

#include "bbayes/chain.hpp"

using namespace bbayes;

namespace {

// |Omega| = 2 fixed-bernoulli {0.3, 0.7}, X-only schema, truth p = 0.7,
// uniform mu: the hand-enumerable instance
ChainInstance two_model_instance(std::size_t k) {
    Schema schema;  // no b, no a: the symbol is just x
    ModelSpec m0{"low", ModelFamily::FixedBernoulli, 0.3, {}, 1.0};
    ModelSpec m1{"high", ModelFamily::FixedBernoulli, 0.7, {}, 1.0};
    ChainInstance inst;
    inst.space = build_model_space(schema, {m0, m1}, {1.0, 1.0});
    inst.generator.schema = schema;
    inst.generator.theta = 0.7;
    inst.k = k;
    return inst;
}

double chisq_critical(std::size_t dof, double z) {
    const double kk = static_cast<double>(dof);
    const double h = 2.0 / (9.0 * kk);
    const double c = 1.0 - h + z * std::sqrt(h);
    return kk * c * c * c;
}

}  // namespace

TEST_CASE("state enumeration counts") {
    CHECK(enumerate_states(two_model_instance(1)).size() == 8);
    CHECK(enumerate_states(two_model_instance(2)).size() == 16);

    Schema schema;
    ModelSpec only{"only", ModelFamily::FixedBernoulli, 0.5, {}, 1.0};
    ChainInstance single;
    single.space = build_model_space(schema, {only}, {1.0});
    single.generator.schema = schema;
    single.generator.theta = 0.5;
    single.k = 1;
    CHECK(enumerate_states(single).size() == 2);  // current = alternate forced
}

TEST_CASE("state ceiling is enforced") {
    auto inst = two_model_instance(4);
    inst.state_ceiling = 10;
    CHECK_THROWS(enumerate_states(inst));
}

TEST_CASE("chain analysis rejects table-learning families") {
    Schema schema;
    schema.b_alphabets = {2};
    ModelSpec c{"c", ModelFamily::Cpt, 0.5, {0}, 1.0};
    ChainInstance inst;
    inst.space = build_model_space(schema, {c}, {1.0});
    inst.generator.schema = schema;
    inst.generator.theta = 0.5;
    inst.k = 1;
    CHECK_THROWS(enumerate_states(inst));
}

TEST_CASE("transition matrix rows are stochastic") {
    auto chain = build_transition_matrix(two_model_instance(2));
    for (const auto& row : chain.transition) {
        double total = 0.0;
        for (double p : row) total += p;
        CHECK(std::abs(total - 1.0) < 1e-12);
    }
}

TEST_CASE("8-state transition matrix matches manual enumeration") {
    const auto chain = build_transition_matrix(two_model_instance(1));
    REQUIRE(chain.states.size() == 8);

    // independent construction: explicit per-state arithmetic
    const double theta[2] = {0.3, 0.7};
    const double truth = 0.7;
    auto index = [](int d, int c, int a) { return (d * 2 + c) * 2 + a; };
    double manual[8][8] = {};
    for (int d = 0; d < 2; ++d) {
        for (int c = 0; c < 2; ++c) {
            for (int a = 0; a < 2; ++a) {
                const double lc = d == 1 ? theta[c] : 1.0 - theta[c];
                const double la = d == 1 ? theta[a] : 1.0 - theta[a];
                const int next_c = (0.5 * lc >= 0.5 * la) ? c : a;
                for (int d2 = 0; d2 < 2; ++d2) {
                    const double pd = d2 == 1 ? truth : 1.0 - truth;
                    for (int a2 = 0; a2 < 2; ++a2) {
                        manual[index(d, c, a)][index(d2, next_c, a2)] += pd * 0.5;
                    }
                }
            }
        }
    }
    for (std::size_t s = 0; s < 8; ++s) {
        const auto& st = chain.states[s];
        const std::size_t si = static_cast<std::size_t>(
            index(static_cast<int>(st.data_code), static_cast<int>(st.current),
                  static_cast<int>(st.alternate)));
        for (std::size_t t = 0; t < 8; ++t) {
            const auto& tt = chain.states[t];
            const std::size_t ti = static_cast<std::size_t>(
                index(static_cast<int>(tt.data_code), static_cast<int>(tt.current),
                      static_cast<int>(tt.alternate)));
            CHECK(std::abs(chain.transition[s][t] - manual[si][ti]) < 1e-12);
        }
    }
}

TEST_CASE("transition graph is strongly connected") {
    auto chain = build_transition_matrix(two_model_instance(2));
    CHECK(check_irreducible(chain.transition).irreducible);
}

TEST_CASE("stationary distribution hand examples") {
    // symmetric two-state chain
    auto pi = stationary_distribution({{0.7, 0.3}, {0.3, 0.7}});
    CHECK(pi[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(pi[1] == doctest::Approx(0.5).epsilon(1e-10));

    // hand balance: pi = (5/6, 1/6)
    pi = stationary_distribution({{0.9, 0.1}, {0.5, 0.5}});
    CHECK(pi[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-10));
    CHECK(pi[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-10));

    // doubly stochastic fixes uniform
    pi = stationary_distribution({{0.2, 0.5, 0.3}, {0.5, 0.3, 0.2}, {0.3, 0.2, 0.5}});
    for (double w : pi) CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("stationary distribution rejects reducible chains") {
    CHECK_THROWS(stationary_distribution({{1.0, 0.0}, {0.0, 1.0}}));
}

TEST_CASE("stationary residual is tight") {
    auto chain = build_transition_matrix(two_model_instance(2));
    chain.stationary = stationary_distribution(chain.transition);
    const std::size_t n = chain.states.size();
    for (std::size_t j = 0; j < n; ++j) {
        double into = 0.0;
        for (std::size_t i = 0; i < n; ++i) into += chain.stationary[i] * chain.transition[i][j];
        CHECK(std::abs(into - chain.stationary[j]) < 1e-10);
    }
}

TEST_CASE("balance residual: hand two-state cut") {
    ChainModel chain;
    chain.states.resize(2);
    chain.transition = {{0.9, 0.1}, {0.5, 0.5}};
    chain.stationary = {5.0 / 6.0, 1.0 / 6.0};
    const double r = balance_residual(chain, {true, false});
    CHECK(r < 1e-12);
    // each one-way flow is 1/12
    CHECK(chain.stationary[0] * chain.transition[0][1] == doctest::Approx(1.0 / 12.0));

    // perturbed vector breaks balance
    ChainModel bad = chain;
    bad.stationary = {5.0 / 6.0 + 0.05, 1.0 / 6.0 - 0.05};
    CHECK(balance_residual(bad, {true, false}) > 1e-3);

    CHECK_THROWS(balance_residual(chain, {true, true}));
}

TEST_CASE("global balance holds on random cuts") {
    auto chain = build_transition_matrix(two_model_instance(1));
    chain.stationary = stationary_distribution(chain.transition);
    std::mt19937 rng(17);
    for (int round = 0; round < 50; ++round) {
        std::vector<bool> cut(chain.states.size());
        bool any_in = false;
        bool any_out = false;
        for (std::size_t i = 0; i < cut.size(); ++i) {
            cut[i] = rng() % 2 == 0;
            (cut[i] ? any_in : any_out) = true;
        }
        if (!any_in || !any_out) continue;
        CHECK(balance_residual(chain, cut) < 1e-10);
    }
}

TEST_CASE("expected log score closed forms") {
    GeneratorSpec gen;
    gen.theta = 0.7;
    ModelSpec m{"m", ModelFamily::FixedBernoulli, 0.4, {}, 1.0};
    CHECK(expected_log_score(m, gen) ==
          doctest::Approx(0.7 * std::log(0.4) + 0.3 * std::log(0.6)));

    // under parity, a single-variable cpt converges to 0.5 everywhere
    GeneratorSpec parity;
    parity.schema.b_alphabets = {2, 2};
    parity.kind = GeneratorKind::Parity;
    ModelSpec c{"c", ModelFamily::Cpt, 0.5, {0}, 1.0};
    CHECK(expected_log_score(c, parity) == doctest::Approx(std::log(0.5)));
}

TEST_CASE("pi(C) grows with the trial length") {
    auto rows = sweep_k(two_model_instance(1), {1, 4});
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].pi_correct > rows[0].pi_correct);
}

TEST_CASE("singleton space puts all stationary mass in C") {
    Schema schema;
    ModelSpec only{"only", ModelFamily::FixedBernoulli, 0.5, {}, 1.0};
    ChainInstance inst;
    inst.space = build_model_space(schema, {only}, {1.0});
    inst.generator.schema = schema;
    inst.generator.theta = 0.5;
    inst.k = 1;
    for (std::size_t k : {1, 2, 3}) {
        inst.k = k;
        auto chain = build_transition_matrix(inst);
        chain.stationary = stationary_distribution(chain.transition);
        assign_partition(chain);
        CHECK(pi_correct_mass(chain) == doctest::Approx(1.0));
    }
}

TEST_CASE("SRF occupancy approaches the stationary distribution") {
    auto inst = two_model_instance(1);
    auto chain = build_transition_matrix(inst);
    chain.stationary = stationary_distribution(chain.transition);

    GeneratorSpec gen = inst.generator;
    const std::size_t periods = 200000;
    auto stream = generate_stream(gen, 404, periods);
    SearchDistribution mu;
    TrialPeriodConfig cfg;
    cfg.k = 1;
    CounterRng rng(404, 2);
    SRFOptions opts;
    opts.record_steps = false;
    opts.record_state_occupancy = true;
    auto rec = run_srf(inst.space, mu, cfg, stream, periods, rng, opts);

    CHECK(occupancy_compare(chain, rec.state_occupancy, 1) < 0.02);
    CHECK_THROWS(occupancy_compare(chain, rec.state_occupancy, 2));
}

TEST_CASE("simulated transition counts fit the exact matrix (chi-square)") {
    auto inst = two_model_instance(1);
    auto chain = build_transition_matrix(inst);
    const std::size_t periods = 50000;
    auto stream = generate_stream(inst.generator, 777, periods);
    SearchDistribution mu;
    TrialPeriodConfig cfg;
    cfg.k = 1;
    CounterRng rng(777, 2);
    SRFOptions opts;
    opts.record_steps = false;
    auto rec = run_srf(inst.space, mu, cfg, stream, periods, rng, opts);

    // reconstruct the per-period state sequence and count transitions
    auto index_of = [&](long long d, std::size_t c, std::size_t a) {
        for (std::size_t i = 0; i < chain.states.size(); ++i)
            if (chain.states[i].data_code == d && chain.states[i].current == c &&
                chain.states[i].alternate == a)
                return i;
        REQUIRE(false);
        return std::size_t{0};
    };
    std::vector<std::size_t> seq;
    seq.reserve(rec.periods.size());
    for (const auto& row : rec.periods) {
        const long long d = stream[row.n - 1].x;  // k = 1: the block is one symbol
        seq.push_back(index_of(d, row.current, row.alternate));
    }
    std::vector<std::vector<long long>> counts(chain.states.size(),
                                               std::vector<long long>(chain.states.size(), 0));
    std::vector<long long> outgoing(chain.states.size(), 0);
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        ++counts[seq[i]][seq[i + 1]];
        ++outgoing[seq[i]];
    }
    double stat = 0.0;
    std::size_t dof = 0;
    for (std::size_t s = 0; s < chain.states.size(); ++s) {
        if (outgoing[s] < 50) continue;
        std::size_t support = 0;
        for (std::size_t t = 0; t < chain.states.size(); ++t) {
            const double p = chain.transition[s][t];
            if (p == 0.0) {
                CHECK(counts[s][t] == 0);
                continue;
            }
            ++support;
            const double expected = static_cast<double>(outgoing[s]) * p;
            const double d = static_cast<double>(counts[s][t]) - expected;
            stat += d * d / expected;
        }
        dof += support - 1;
    }
    CHECK(stat < chisq_critical(dof, 2.326));  // 0.01 level
}
