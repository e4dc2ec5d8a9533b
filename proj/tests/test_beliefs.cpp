#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <peerpred/beliefs.hpp>
#include <peerpred/model.hpp>
#include <peerpred/rng.hpp>

#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace peerpred;

namespace {

GameConfig canonical() {
    GameConfig c;
    c.signal_model.high_signal_prob = {0.3, 0.9};
    c.seller.commitment_prior = 0.2;
    c.seller.strategic_strategy = {{{0.2, 0.8}, {0.2, 0.8}}};
    c.econ.epsilon = 0.01;
    return validate(c);
}

GameConfig asymmetric() {
    GameConfig c = canonical();
    c.seller.strategic_strategy[1] = {0.5, 0.5};
    return validate(c);
}

constexpr double kTol = 1e-12;

}  // namespace

// Reference values below are exact rationals worked out by hand for the
// canonical config and frozen here as fractions.

TEST_CASE("canonical effort prior and signal prior") {
    GameConfig c = canonical();
    auto prior = effort_prior(c, 1);
    REQUIRE(prior.size() == 2);
    CHECK(prior[0] == Catch::Approx(0.16).margin(kTol));
    CHECK(prior[1] == Catch::Approx(0.84).margin(kTol));
    CHECK(signal_prior(c, 1) == Catch::Approx(0.804).margin(kTol));
    CHECK(signal_probability(c, 1, Signal::low) == Catch::Approx(0.196).margin(kTol));
}

TEST_CASE("canonical signal likelihoods per type") {
    GameConfig c = canonical();
    CHECK(signal_given_type(c, 1, SellerType::commitment) == Catch::Approx(0.9).margin(kTol));
    CHECK(signal_given_type(c, 1, SellerType::strategic) == Catch::Approx(0.78).margin(kTol));
    CHECK(signal_given_type(c, 1, SellerType::strategic, Signal::low) ==
          Catch::Approx(0.22).margin(kTol));
}

TEST_CASE("canonical type posteriors") {
    GameConfig c = canonical();
    CHECK(type_posterior(c, 1, Signal::high) == Catch::Approx(15.0 / 67.0).margin(kTol));
    CHECK(type_posterior(c, 1, Signal::low) == Catch::Approx(5.0 / 49.0).margin(kTol));
}

TEST_CASE("canonical effort-conditioned beliefs") {
    GameConfig c = canonical();
    // Pr(committed | peer effort = top) = 0.2 / 0.84.
    CHECK(type_given_effort(c, 2, 1) == Catch::Approx(5.0 / 21.0).margin(kTol));
    CHECK(type_given_effort(c, 2, 0) == Catch::Approx(0.0).margin(kTol));
    CHECK(cross_signal_given_effort(c, 1, Signal::high, 1) ==
          Catch::Approx(283.0 / 350.0).margin(kTol));
    CHECK(cross_signal_given_effort(c, 1, Signal::high, 0) == Catch::Approx(0.78).margin(kTol));
    CHECK(effort_posterior(c, 1, 1, Signal::high) == Catch::Approx(283.0 / 335.0).margin(kTol));
    CHECK(effort_posterior(c, 1, 0, Signal::high) == Catch::Approx(52.0 / 335.0).margin(kTol));
    CHECK(effort_posterior(c, 1, 1, Signal::low) == Catch::Approx(201.0 / 245.0).margin(kTol));
}

TEST_CASE("canonical peer-signal posterior matrix") {
    GameConfig c = canonical();
    BeliefSet b = belief_set(c, 1);
    CHECK(b.g_of(Signal::high, Signal::high) == Catch::Approx(2703.0 / 3350.0).margin(kTol));
    CHECK(b.g_of(Signal::high, Signal::low) == Catch::Approx(1941.0 / 2450.0).margin(kTol));
    CHECK(b.g_of(Signal::low, Signal::high) == Catch::Approx(647.0 / 3350.0).margin(kTol));
    CHECK(b.g_of(Signal::low, Signal::low) == Catch::Approx(509.0 / 2450.0).margin(kTol));
    CHECK(b.g_gap() == Catch::Approx(48.0 / 3283.0).margin(kTol));

    CHECK(signal_posterior(c, 1, Signal::high, Signal::high) ==
          Catch::Approx(2703.0 / 3350.0).margin(kTol));
}

TEST_CASE("the two buyers see identical beliefs under a symmetric config") {
    GameConfig c = canonical();
    BeliefSet b1 = belief_set(c, 1);
    BeliefSet b2 = belief_set(c, 2);
    CHECK(b2.buyer == 2);
    CHECK(b1.signal_prior_high == Catch::Approx(b2.signal_prior_high).margin(kTol));
    for (Signal own : {Signal::low, Signal::high})
        for (Signal peer : {Signal::low, Signal::high})
            CHECK(b1.g_of(peer, own) == Catch::Approx(b2.g_of(peer, own)).margin(kTol));
}

TEST_CASE("asymmetric strategies give each buyer its own cascade") {
    GameConfig c = asymmetric();
    BeliefSet b1 = belief_set(c, 1);
    BeliefSet b2 = belief_set(c, 2);

    // Buyer 1's own-signal model is unchanged; only the peer side moved.
    CHECK(b1.signal_prior_high == Catch::Approx(0.804).margin(kTol));
    CHECK(b1.g_of(Signal::high, Signal::high) == Catch::Approx(447.0 / 670.0).margin(kTol));
    CHECK(b1.g_of(Signal::high, Signal::low) == Catch::Approx(309.0 / 490.0).margin(kTol));

    CHECK(b2.signal_prior_high == Catch::Approx(0.66).margin(kTol));
    CHECK(b2.signal_high_given_strategic == Catch::Approx(0.6).margin(kTol));
    CHECK(b2.type_posterior_given_high == Catch::Approx(3.0 / 11.0).margin(kTol));
    CHECK(b2.type_posterior_given_low == Catch::Approx(1.0 / 17.0).margin(kTol));
    CHECK(b2.g_of(Signal::high, Signal::high) == Catch::Approx(447.0 / 550.0).margin(kTol));
    CHECK(b2.g_of(Signal::high, Signal::low) == Catch::Approx(669.0 / 850.0).margin(kTol));
}

TEST_CASE("degenerate priors collapse the posterior matrix") {
    GameConfig c = canonical();
    c.seller.commitment_prior = 1.0;
    c = validate(c);
    BeliefSet b = belief_set(c, 1);
    CHECK(b.g_of(Signal::high, Signal::high) == Catch::Approx(0.9).margin(kTol));
    CHECK(b.g_gap() == 0.0);  // the cascade is exact when every factor is 0 or 1
    CHECK(type_posterior(c, 1, Signal::low) == Catch::Approx(1.0).margin(kTol));

    c.seller.commitment_prior = 0.0;
    c = validate(c);
    b = belief_set(c, 1);
    CHECK(b.g_of(Signal::high, Signal::high) == Catch::Approx(0.78).margin(kTol));
    CHECK(std::abs(b.g_gap()) <= kTol);
    CHECK(type_posterior(c, 1, Signal::high) == Catch::Approx(0.0).margin(kTol));
    CHECK(effort_prior(c, 1) == c.seller.strategy(1));
}

TEST_CASE("conditioning on a zero-probability effort throws") {
    GameConfig c = canonical();
    c.seller.commitment_prior = 1.0;
    c = validate(c);
    // Effort prior is (0, 1): the bottom effort level is unreachable.
    CHECK_THROWS_AS(type_given_effort(c, 2, 0), DegenerateBelief);
    // The posterior query keeps zero mass at zero instead of throwing.
    CHECK(effort_posterior(c, 1, 0, Signal::high) == 0.0);
    CHECK(effort_posterior(c, 1, 1, Signal::high) == Catch::Approx(1.0).margin(kTol));
}

TEST_CASE("single-step type update matches the posterior from the prior") {
    GameConfig c = canonical();
    BeliefSet b = belief_set(c, 1);
    for (Signal s : {Signal::low, Signal::high}) {
        double updated = type_update(c.seller.commitment_prior, s,
                                     b.signal_high_given_commitment, b.signal_high_given_strategic);
        CHECK(updated == Catch::Approx(type_posterior(c, 1, s)).margin(kTol));
    }
    CHECK_THROWS_AS(type_update(0.0, Signal::high, 1.0, 0.0), DegenerateBelief);
}

TEST_CASE("random configs: distributions normalize and the martingale is exact") {
    Rng rng(31);
    for (int t = 0; t < 300; ++t) {
        GameConfig c = testgen::random_config(rng);
        int buyer = 1 + static_cast<int>(rng.raw() % 2);
        BeliefSet b = belief_set(c, buyer);

        double prior_sum = 0.0;
        for (double p : b.effort_prior) {
            CHECK(p >= 0.0);
            prior_sum += p;
        }
        CHECK(prior_sum == Catch::Approx(1.0).margin(kTol));

        for (Signal own : {Signal::low, Signal::high}) {
            double row = b.g_of(Signal::low, own) + b.g_of(Signal::high, own);
            CHECK(row == Catch::Approx(1.0).margin(kTol));
        }

        double p_h = b.signal_prior_high;
        double mixed = p_h * b.type_posterior_given_high + (1.0 - p_h) * b.type_posterior_given_low;
        CHECK(mixed == Catch::Approx(c.seller.commitment_prior).margin(kTol));
    }
}

TEST_CASE("random configs: posterior orderings are strict when nondegenerate") {
    Rng rng(32);
    for (int t = 0; t < 300; ++t) {
        GameConfig c = testgen::random_config(rng);
        int buyer = 1 + static_cast<int>(rng.raw() % 2);
        BeliefSet b = belief_set(c, buyer);
        double prior = c.seller.commitment_prior;
        CHECK(b.type_posterior_given_high > prior + 1e-12);
        CHECK(b.type_posterior_given_low < prior - 1e-12);
        CHECK(b.g_of(Signal::high, Signal::high) > b.g_of(Signal::high, Signal::low) + 1e-12);
    }
}

TEST_CASE("random configs: the cascade agrees with the type-decomposition route") {
    Rng rng(33);
    for (int t = 0; t < 300; ++t) {
        GameConfig c = testgen::random_config(rng);
        for (int buyer : {1, 2}) {
            BeliefSet lib = belief_set(c, buyer);
            oracle::Beliefs ref = oracle::beliefs(testgen::to_oracle(c), buyer);
            CHECK(lib.signal_prior_high == Catch::Approx(ref.p_high).margin(kTol));
            CHECK(lib.type_posterior_given_high == Catch::Approx(ref.tp_high).margin(kTol));
            CHECK(lib.type_posterior_given_low == Catch::Approx(ref.tp_low).margin(kTol));
            CHECK(lib.g_of(Signal::high, Signal::high) == Catch::Approx(ref.g_hh).margin(kTol));
            CHECK(lib.g_of(Signal::high, Signal::low) == Catch::Approx(ref.g_hl).margin(kTol));
            CHECK(lib.g_of(Signal::low, Signal::high) == Catch::Approx(ref.g_lh).margin(kTol));
            CHECK(lib.g_of(Signal::low, Signal::low) == Catch::Approx(ref.g_ll).margin(kTol));
        }
    }
}

TEST_CASE("degenerate mutations collapse the gap") {
    Rng rng(34);
    for (int t = 0; t < 100; ++t) {
        GameConfig c = testgen::degenerate_mutation(testgen::random_config(rng), rng);
        for (int buyer : {1, 2}) {
            BeliefSet b = belief_set(c, buyer);
            CHECK(std::abs(b.g_gap()) <= 1e-12);
        }
    }
}
