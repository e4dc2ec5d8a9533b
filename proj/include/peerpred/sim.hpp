// Seeded Monte Carlo over a sequence of Feedback Games. The seller's type is
// drawn once (or forced), then each game samples efforts and signals, pays
// truthful reports through each buyer's payment scheme, and carries the
// Bayesian type posterior forward as the next game's commitment prior.
//
// The belief state is carried in log odds. A probability representation
// saturates to exactly 0 or 1 in double precision after a few thousand
// one-sided games; log odds stay finite for any horizon reachable here, and
// the probability view is recovered per record.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "peerpred/beliefs.hpp"
#include "peerpred/model.hpp"
#include "peerpred/payments.hpp"
#include "peerpred/rng.hpp"

namespace peerpred {

enum class TypeMode { DRAW, FIXED_COMMITMENT, FIXED_STRATEGIC };
enum class PaymentMode { SOLVE_EACH_GAME, FREEZE_FIRST_GAME };

inline const char* to_string(TypeMode m) {
    switch (m) {
        case TypeMode::DRAW: return "draw";
        case TypeMode::FIXED_COMMITMENT: return "fixed-commitment";
        case TypeMode::FIXED_STRATEGIC: return "fixed-strategic";
    }
    return "unknown";
}

inline const char* to_string(PaymentMode m) {
    return m == PaymentMode::SOLVE_EACH_GAME ? "solve-each-game" : "freeze-first-game";
}

// Maps the current commitment prior to the strategic effort vectors in force
// for the next game. Null means "constant": the base config's vectors.
using StrategyPolicy = std::function<std::array<std::vector<double>, 2>(double)>;

struct SimConfig {
    GameConfig base;
    int num_games = 1;
    std::uint64_t seed = 0;
    TypeMode type_mode = TypeMode::DRAW;
    PaymentMode resolve_payments = PaymentMode::SOLVE_EACH_GAME;
    StrategyPolicy strategy_policy;  // optional
};

struct GameRecord {
    int game_index = 0;   // 1-based
    double prior = 0.0;   // commitment prior at game start
    double prior_log_odds = 0.0;
    bool degenerate_prior = false;      // prior not strictly inside (0,1)
    std::array<int, 2> efforts{};       // 0-based effort index per buyer
    std::array<Signal, 2> signals{};
    std::array<Signal, 2> reports{};    // equal to signals under truthful play
    std::array<double, 2> payments{};   // realized tau per buyer
    double game_budget = 0.0;           // payments[0] + payments[1]
    std::array<double, 2> scheme_budget{};   // ex-ante budget of the scheme used
    std::array<double, 2> honesty_margin{};  // realized margin at the received signal
    double posterior = 0.0;  // after both report updates
    double posterior_log_odds = 0.0;
};

struct SimTrace {
    SellerType seller_type = SellerType::strategic;
    std::uint64_t seed = 0;
    TypeMode type_mode = TypeMode::DRAW;
    PaymentMode resolve_payments = PaymentMode::SOLVE_EACH_GAME;
    std::vector<GameRecord> games;
    double cumulative_budget = 0.0;  // equals the sum of all payments exactly
};

namespace detail {

inline double prob_from_log_odds(double lambda) {
    if (lambda >= 0.0) return 1.0 / (1.0 + std::exp(-lambda));
    double e = std::exp(lambda);
    return e / (1.0 + e);
}

inline double log_odds(double p) { return std::log(p) - std::log1p(-p); }

// Pr(s = h | theta_s) under an explicit strategic vector.
inline double strategic_high(const SignalModel& model, const std::vector<double>& strategy) {
    double ph = 0.0;
    for (int m = 0; m < model.num_efforts(); ++m)
        ph += model.f(Signal::high, m) * strategy[static_cast<std::size_t>(m)];
    return ph;
}

}  // namespace detail

// Plays one Feedback Game at the current belief state. game_config must
// already carry the current prior and the strategies in force; prior_log_odds
// is the same prior in log odds (kept separate so saturation in the
// probability view cannot corrupt the belief state).
inline GameRecord run_game(const GameConfig& game_config, SellerType type,
                           const std::array<PaymentScheme, 2>& schemes, int game_index,
                           double prior_log_odds, Rng& rng) {
    const SignalModel& signal_model = game_config.signal_model;
    const int M = signal_model.num_efforts();

    GameRecord rec;
    rec.game_index = game_index;
    rec.prior = game_config.seller.commitment_prior;
    rec.prior_log_odds = prior_log_odds;
    rec.degenerate_prior = !(rec.prior > 0.0 && rec.prior < 1.0);

    for (int i = 0; i < 2; ++i) {
        rec.efforts[i] = type == SellerType::commitment
                             ? M - 1
                             : rng.categorical(game_config.seller.strategy(i + 1));
        Signal s = rng.bernoulli(signal_model.f(Signal::high, rec.efforts[i])) ? Signal::high
                                                                               : Signal::low;
        rec.signals[i] = s;
        rec.reports[i] = s;  // truthful equilibrium play
    }

    double lambda = prior_log_odds;
    for (int i = 0; i < 2; ++i) {
        const BeliefSet beliefs = belief_set(game_config, i + 1);
        Signal own = rec.reports[i];
        Signal peer = rec.reports[1 - i];
        rec.payments[i] = schemes[i].of(own, peer);
        rec.scheme_budget[i] = schemes[i].budget;

        Signal misreport = other(own);
        rec.honesty_margin[i] = expected_payment(schemes[i], beliefs, own, own) -
                                expected_payment(schemes[i], beliefs, misreport, own) -
                                game_config.econ.delta(misreport);

        // One Bayes step per report: in log odds the update is adding the
        // log likelihood ratio of the observed signal under the two types.
        double p_commit = signal_model.f(own, M - 1);
        double p_strategic =
            own == Signal::high
                ? detail::strategic_high(signal_model, game_config.seller.strategy(i + 1))
                : 1.0 - detail::strategic_high(signal_model, game_config.seller.strategy(i + 1));
        lambda += std::log(p_commit) - std::log(p_strategic);
    }

    rec.game_budget = rec.payments[0] + rec.payments[1];
    rec.posterior_log_odds = lambda;
    rec.posterior = detail::prob_from_log_odds(lambda);
    return rec;
}

inline SimTrace run_sequence(const SimConfig& sim) {
    if (sim.num_games < 1) throw std::invalid_argument("num_games must be at least 1");
    GameConfig base = validate(sim.base);

    SimTrace trace;
    trace.seed = sim.seed;
    trace.type_mode = sim.type_mode;
    trace.resolve_payments = sim.resolve_payments;

    // Substream 0 draws the type; game t uses substream t. Games therefore
    // consume identical random numbers across payment modes and re-runs.
    Rng setup_rng = Rng::substream(sim.seed, 0);
    switch (sim.type_mode) {
        case TypeMode::DRAW:
            trace.seller_type = setup_rng.bernoulli(base.seller.commitment_prior)
                                    ? SellerType::commitment
                                    : SellerType::strategic;
            break;
        case TypeMode::FIXED_COMMITMENT: trace.seller_type = SellerType::commitment; break;
        case TypeMode::FIXED_STRATEGIC: trace.seller_type = SellerType::strategic; break;
    }

    double lambda = detail::log_odds(base.seller.commitment_prior);
    double current_prob = base.seller.commitment_prior;
    std::array<PaymentScheme, 2> frozen_schemes{};
    bool have_frozen = false;

    trace.games.reserve(static_cast<std::size_t>(sim.num_games));
    for (int t = 1; t <= sim.num_games; ++t) {
        GameConfig current = base;
        current.seller.commitment_prior = current_prob;
        if (sim.strategy_policy) {
            current.seller.strategic_strategy = sim.strategy_policy(current.seller.commitment_prior);
        }
        current = validate(current);  // also vets policy output

        std::array<PaymentScheme, 2> schemes;
        if (sim.resolve_payments == PaymentMode::FREEZE_FIRST_GAME) {
            if (!have_frozen) {
                frozen_schemes = {solve_lp(build_lp(current, 1)), solve_lp(build_lp(current, 2))};
                have_frozen = true;
            }
            schemes = frozen_schemes;
        } else {
            schemes = {solve_lp(build_lp(current, 1)), solve_lp(build_lp(current, 2))};
        }

        Rng game_rng = Rng::substream(sim.seed, static_cast<std::uint64_t>(t));
        GameRecord rec = run_game(current, trace.seller_type, schemes, t, lambda, game_rng);
        lambda = rec.posterior_log_odds;
        current_prob = rec.posterior;
        trace.cumulative_budget += rec.game_budget;
        trace.games.push_back(std::move(rec));
    }
    return trace;
}

struct SimSummary {
    int num_games = 0;
    SellerType seller_type = SellerType::strategic;
    double cumulative_budget = 0.0;
    double mean_game_budget = 0.0;
    std::array<double, 2> high_signal_frequency{};  // per buyer
    double pooled_high_frequency = 0.0;
    double final_posterior = 0.0;
    double final_posterior_log_odds = 0.0;
    // Quantiles of the end-of-game posterior path (linear interpolation).
    double posterior_min = 0.0;
    double posterior_q25 = 0.0;
    double posterior_median = 0.0;
    double posterior_q75 = 0.0;
    double posterior_max = 0.0;
    double min_honesty_margin = 0.0;
    double mean_honesty_margin = 0.0;
};

namespace detail {

inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    double pos = q * static_cast<double>(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * frac;
}

}  // namespace detail

inline SimSummary summarize(const SimTrace& trace) {
    if (trace.games.empty()) throw std::invalid_argument("cannot summarize an empty trace");

    SimSummary s;
    s.num_games = static_cast<int>(trace.games.size());
    s.seller_type = trace.seller_type;
    s.cumulative_budget = trace.cumulative_budget;
    s.mean_game_budget = trace.cumulative_budget / static_cast<double>(s.num_games);

    std::vector<double> posteriors;
    posteriors.reserve(trace.games.size());
    std::array<int, 2> highs{};
    double margin_sum = 0.0;
    double margin_min = trace.games.front().honesty_margin[0];
    for (const auto& g : trace.games) {
        posteriors.push_back(g.posterior);
        for (int i = 0; i < 2; ++i) {
            if (g.signals[i] == Signal::high) ++highs[i];
            margin_sum += g.honesty_margin[i];
            margin_min = std::min(margin_min, g.honesty_margin[i]);
        }
    }
    for (int i = 0; i < 2; ++i)
        s.high_signal_frequency[i] = static_cast<double>(highs[i]) / s.num_games;
    s.pooled_high_frequency = static_cast<double>(highs[0] + highs[1]) / (2.0 * s.num_games);
    s.final_posterior = trace.games.back().posterior;
    s.final_posterior_log_odds = trace.games.back().posterior_log_odds;
    s.min_honesty_margin = margin_min;
    s.mean_honesty_margin = margin_sum / (2.0 * s.num_games);

    std::sort(posteriors.begin(), posteriors.end());
    s.posterior_min = posteriors.front();
    s.posterior_q25 = detail::quantile_sorted(posteriors, 0.25);
    s.posterior_median = detail::quantile_sorted(posteriors, 0.5);
    s.posterior_q75 = detail::quantile_sorted(posteriors, 0.75);
    s.posterior_max = posteriors.back();
    return s;
}

}  // namespace peerpred
