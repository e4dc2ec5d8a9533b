// The Bayesian belief cascade for one designated buyer: effort priors,
// signal priors, type posteriors and the peer-signal posterior g^i(s_k|s_j)
// that the payment scheme conditions on.
//
// All functions are pure over a validated GameConfig; buyer indices are
// 1-based and the peer of buyer i is peer_of(i).
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "peerpred/model.hpp"

namespace peerpred {

// Conditioning on a zero-probability event. Unreachable from a validated
// config through belief_set (f is fully mixed, so signal priors are interior),
// but reachable through the effort-conditioned queries when a strategy vector
// has zero entries.
class DegenerateBelief : public std::runtime_error {
public:
    explicit DegenerateBelief(const std::string& what) : std::runtime_error(what) {}
};

struct BeliefSet {
    int buyer = 1;
    std::vector<double> effort_prior;            // Pr(q_m^i)
    double signal_prior_high = 0.0;              // Pr(s^i = h)
    double signal_high_given_commitment = 0.0;   // Pr(s^i = h | theta_c) = f(h|q_M)
    double signal_high_given_strategic = 0.0;    // Pr(s^i = h | theta_s)
    double type_posterior_given_high = 0.0;      // Pr(theta_c | s^i = h)
    double type_posterior_given_low = 0.0;       // Pr(theta_c | s^i = l)
    // g[j][k] = g^i(s_k | s_j): probability the peer's signal is s_k given own
    // signal s_j. Rows (fixed j) sum to 1.
    std::array<std::array<double, 2>, 2> g{};

    double g_of(Signal peer, Signal own) const {
        return g[static_cast<int>(own)][static_cast<int>(peer)];
    }
    double g_gap() const { return g_of(Signal::high, Signal::high) - g_of(Signal::high, Signal::low); }
};

// Pr(q_m^i): mixture of the commitment point mass and the strategic vector.
inline std::vector<double> effort_prior(const GameConfig& config, int buyer) {
    const double pc = config.seller.commitment_prior;
    const auto& strat = config.seller.strategy(buyer);
    const int M = config.signal_model.num_efforts();
    std::vector<double> prior(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) {
        double commit = (m == M - 1) ? 1.0 : 0.0;
        prior[static_cast<std::size_t>(m)] = commit * pc + strat[static_cast<std::size_t>(m)] * (1.0 - pc);
    }
    return prior;
}

// Pr(s^i = h), always interior because f is fully mixed.
inline double signal_prior(const GameConfig& config, int buyer) {
    const auto prior = effort_prior(config, buyer);
    const int M = config.signal_model.num_efforts();
    double ph = 0.0;
    for (int m = 0; m < M; ++m)
        ph += config.signal_model.f(Signal::high, m) * prior[static_cast<std::size_t>(m)];
    return ph;
}

inline double signal_probability(const GameConfig& config, int buyer, Signal s) {
    double ph = signal_prior(config, buyer);
    return s == Signal::high ? ph : 1.0 - ph;
}

// Pr(s^i = h | theta): the commitment type always plays q_M; the strategic
// type mixes per its strategy vector.
inline double signal_given_type(const GameConfig& config, int buyer, SellerType type) {
    const int M = config.signal_model.num_efforts();
    if (type == SellerType::commitment) return config.signal_model.f(Signal::high, M - 1);
    const auto& strat = config.seller.strategy(buyer);
    double ph = 0.0;
    for (int m = 0; m < M; ++m)
        ph += config.signal_model.f(Signal::high, m) * strat[static_cast<std::size_t>(m)];
    return ph;
}

inline double signal_given_type(const GameConfig& config, int buyer, SellerType type, Signal s) {
    double ph = signal_given_type(config, buyer, type);
    return s == Signal::high ? ph : 1.0 - ph;
}

// Pr(theta_c | s^i = s): Bayes over the two types.
inline double type_posterior(const GameConfig& config, int buyer, Signal s) {
    const double pc = config.seller.commitment_prior;
    double ps = signal_probability(config, buyer, s);
    if (!(ps > 0.0))
        throw DegenerateBelief("signal prior is zero; cannot condition on it");
    return signal_given_type(config, buyer, SellerType::commitment, s) * pc / ps;
}

// Pr(theta_c | q_m^{r(i)}): conditioning on the effort exerted for the other
// buyer. Undefined (and rejected) when that effort has zero prior mass.
inline double type_given_effort(const GameConfig& config, int other_buyer, int effort_index) {
    const double pc = config.seller.commitment_prior;
    const auto prior = effort_prior(config, other_buyer);
    double pq = prior[static_cast<std::size_t>(effort_index)];
    if (!(pq > 0.0))
        throw DegenerateBelief("conditioning on zero-probability effort q_" +
                               std::to_string(effort_index + 1));
    const int M = config.signal_model.num_efforts();
    double commit = (effort_index == M - 1) ? 1.0 : 0.0;
    return commit * pc / pq;
}

// Pr(s^i = s | q_m^{r(i)}): the peer's materialized effort informs the type,
// which in turn informs buyer i's own signal.
inline double cross_signal_given_effort(const GameConfig& config, int buyer, Signal s,
                                        int peer_effort_index) {
    double w = type_given_effort(config, peer_of(buyer), peer_effort_index);
    return signal_given_type(config, buyer, SellerType::commitment, s) * w +
           signal_given_type(config, buyer, SellerType::strategic, s) * (1.0 - w);
}

// Pr(q_m^{r(i)} | s^i = s). Efforts with zero prior mass keep zero posterior
// mass; only the signal prior is a conditioning event here.
inline double effort_posterior(const GameConfig& config, int buyer, int peer_effort_index,
                               Signal s) {
    const auto peer_prior = effort_prior(config, peer_of(buyer));
    double pq = peer_prior[static_cast<std::size_t>(peer_effort_index)];
    if (pq == 0.0) return 0.0;
    double ps = signal_probability(config, buyer, s);
    if (!(ps > 0.0))
        throw DegenerateBelief("signal prior is zero; cannot condition on it");
    return cross_signal_given_effort(config, buyer, s, peer_effort_index) * pq / ps;
}

// g^i(s_k | s_j): the signal posterior the payments condition on.
inline double signal_posterior(const GameConfig& config, int buyer, Signal peer, Signal own) {
    const int M = config.signal_model.num_efforts();
    double total = 0.0;
    for (int m = 0; m < M; ++m)
        total += config.signal_model.f(peer, m) * effort_posterior(config, buyer, m, own);
    return total;
}

// Eagerly assembles the whole cascade; the LP needs all of it.
inline BeliefSet belief_set(const GameConfig& config, int buyer) {
    BeliefSet b;
    b.buyer = buyer;
    b.effort_prior = effort_prior(config, buyer);
    b.signal_prior_high = signal_prior(config, buyer);
    b.signal_high_given_commitment = signal_given_type(config, buyer, SellerType::commitment);
    b.signal_high_given_strategic = signal_given_type(config, buyer, SellerType::strategic);
    b.type_posterior_given_high = type_posterior(config, buyer, Signal::high);
    b.type_posterior_given_low = type_posterior(config, buyer, Signal::low);
    for (Signal own : {Signal::low, Signal::high})
        for (Signal peer : {Signal::low, Signal::high})
            b.g[static_cast<int>(own)][static_cast<int>(peer)] =
                signal_posterior(config, buyer, peer, own);
    return b;
}

// One Bayes step of the type belief on a single observed signal, starting
// from an arbitrary current prior. strategic_high is Pr(s = h | theta_s) for
// the buyer whose signal is being incorporated.
inline double type_update(double prior, Signal s, double commitment_high, double strategic_high) {
    double pc = s == Signal::high ? commitment_high : 1.0 - commitment_high;
    double ps = s == Signal::high ? strategic_high : 1.0 - strategic_high;
    double denom = pc * prior + ps * (1.0 - prior);
    if (!(denom > 0.0))
        throw DegenerateBelief("type update conditions on a zero-probability signal");
    return pc * prior / denom;
}

}  // namespace peerpred
