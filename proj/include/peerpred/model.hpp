// Validated configuration types for the Feedback Game: the signal
// technology, the seller model (commitment prior + strategic effort
// distributions) and the economic parameters of the payment LP.
//
// Everything here is a plain immutable-by-convention value type. validate()
// rejects, never repairs; downstream code assumes a validated GameConfig.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace peerpred {

enum class Signal : int { low = 0, high = 1 };

enum class SellerType : int { strategic = 0, commitment = 1 };

inline Signal other(Signal s) { return s == Signal::low ? Signal::high : Signal::low; }
inline const char* to_string(Signal s) { return s == Signal::low ? "l" : "h"; }
inline const char* to_string(SellerType t) {
    return t == SellerType::commitment ? "commitment" : "strategic";
}

// Peer of buyer i under 1-based buyer indexing.
inline int peer_of(int buyer) { return buyer == 1 ? 2 : 1; }

// Tolerance used for simplex-sum checks and point-mass detection.
inline constexpr double kSimplexTol = 1e-12;

enum class ValidationCode {
    NON_MONOTONE_F,
    F_NOT_MIXED,
    STRATEGY_NOT_SIMPLEX,
    BAD_PRIOR,
    NONPOSITIVE_EPSILON,
    NEGATIVE_MONEY_BOUND,
    BAD_SHAPE,
    UNKNOWN_KEY,
    MISSING_KEY,
    BAD_TYPE,
};

inline const char* to_string(ValidationCode c) {
    switch (c) {
        case ValidationCode::NON_MONOTONE_F: return "NON_MONOTONE_F";
        case ValidationCode::F_NOT_MIXED: return "F_NOT_MIXED";
        case ValidationCode::STRATEGY_NOT_SIMPLEX: return "STRATEGY_NOT_SIMPLEX";
        case ValidationCode::BAD_PRIOR: return "BAD_PRIOR";
        case ValidationCode::NONPOSITIVE_EPSILON: return "NONPOSITIVE_EPSILON";
        case ValidationCode::NEGATIVE_MONEY_BOUND: return "NEGATIVE_MONEY_BOUND";
        case ValidationCode::BAD_SHAPE: return "BAD_SHAPE";
        case ValidationCode::UNKNOWN_KEY: return "UNKNOWN_KEY";
        case ValidationCode::MISSING_KEY: return "MISSING_KEY";
        case ValidationCode::BAD_TYPE: return "BAD_TYPE";
    }
    return "UNKNOWN";
}

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<ValidationCode> codes, const std::string& detail = "")
        : std::runtime_error(make_message(codes, detail)), codes_(std::move(codes)) {}

    const std::vector<ValidationCode>& codes() const { return codes_; }

    bool has(ValidationCode c) const {
        for (auto x : codes_)
            if (x == c) return true;
        return false;
    }

private:
    static std::string make_message(const std::vector<ValidationCode>& codes,
                                    const std::string& detail) {
        std::string msg = "invalid config:";
        for (auto c : codes) {
            msg += ' ';
            msg += to_string(c);
        }
        if (!detail.empty()) msg += " (" + detail + ")";
        return msg;
    }

    std::vector<ValidationCode> codes_;
};

// Binary-signal technology over M effort levels. Only f(h|q_m) is stored;
// f(l|q_m) is always derived as the complement.
struct SignalModel {
    std::vector<double> high_signal_prob;  // entry m-1 = f(h|q_m)

    int num_efforts() const { return static_cast<int>(high_signal_prob.size()); }

    double f(Signal s, int effort_index) const {  // effort_index is 0-based
        double ph = high_signal_prob[static_cast<std::size_t>(effort_index)];
        return s == Signal::high ? ph : 1.0 - ph;
    }

    bool operator==(const SignalModel&) const = default;
};

struct SellerModel {
    double commitment_prior = 0.0;                         // Pr(theta_c)
    std::array<std::vector<double>, 2> strategic_strategy; // Pr(qbar_m^i), i = 1,2
    // True iff 0 < Pr(theta_c) < 1 and neither strategic vector is the q_M
    // point mass; set by validate(). This is the premise of the ordering
    // lemmas and exactly the condition under which the payment LP is feasible.
    bool is_nondegenerate = false;

    const std::vector<double>& strategy(int buyer) const {
        return strategic_strategy[static_cast<std::size_t>(buyer - 1)];
    }

    bool operator==(const SellerModel&) const = default;
};

struct EconomicParams {
    double delta_l = 0.0;     // lying-benefit bound for falsely reporting l
    double delta_h = 0.0;     // lying-benefit bound for falsely reporting h
    double cost_bound = 0.0;  // participation-cost bound C
    double epsilon = 0.0;     // LP strictness margin, must be > 0

    double delta(Signal misreport) const {
        return misreport == Signal::high ? delta_h : delta_l;
    }

    bool operator==(const EconomicParams&) const = default;
};

struct GameConfig {
    SignalModel signal_model;
    SellerModel seller;
    EconomicParams econ;

    bool operator==(const GameConfig&) const = default;
};

namespace detail {

inline bool is_simplex(const std::vector<double>& v) {
    double sum = 0.0;
    for (double p : v) {
        if (!(p >= 0.0)) return false;  // also rejects NaN
        sum += p;
    }
    return std::abs(sum - 1.0) <= kSimplexTol;
}

inline bool is_qm_point_mass(const std::vector<double>& v) {
    return !v.empty() && v.back() >= 1.0 - kSimplexTol;
}

}  // namespace detail

// Total validation of a raw config. Collects every violated invariant and
// throws a single ValidationError carrying all reason codes; on success
// returns the config with is_nondegenerate set. Idempotent.
inline GameConfig validate(GameConfig config) {
    std::vector<ValidationCode> codes;
    const auto& f = config.signal_model.high_signal_prob;

    if (f.size() < 2) {
        codes.push_back(ValidationCode::BAD_SHAPE);
    } else {
        bool mixed = true, monotone = true;
        for (std::size_t m = 0; m < f.size(); ++m) {
            if (!(f[m] > 0.0 && f[m] < 1.0)) mixed = false;
            if (m > 0 && !(f[m] > f[m - 1])) monotone = false;
        }
        if (!mixed) codes.push_back(ValidationCode::F_NOT_MIXED);
        if (!monotone) codes.push_back(ValidationCode::NON_MONOTONE_F);
    }

    double prior = config.seller.commitment_prior;
    if (!(prior >= 0.0 && prior <= 1.0)) codes.push_back(ValidationCode::BAD_PRIOR);

    bool shape_ok = true;
    for (const auto& strat : config.seller.strategic_strategy) {
        if (strat.size() != f.size()) shape_ok = false;
    }
    if (!shape_ok) codes.push_back(ValidationCode::BAD_SHAPE);

    bool simplex_ok = true;
    for (const auto& strat : config.seller.strategic_strategy) {
        if (!detail::is_simplex(strat)) simplex_ok = false;
    }
    if (!simplex_ok) codes.push_back(ValidationCode::STRATEGY_NOT_SIMPLEX);

    if (!(config.econ.epsilon > 0.0)) codes.push_back(ValidationCode::NONPOSITIVE_EPSILON);
    if (!(config.econ.delta_l >= 0.0) || !(config.econ.delta_h >= 0.0) ||
        !(config.econ.cost_bound >= 0.0))
        codes.push_back(ValidationCode::NEGATIVE_MONEY_BOUND);

    if (!codes.empty()) throw ValidationError(std::move(codes));

    config.seller.is_nondegenerate =
        prior > 0.0 && prior < 1.0 &&
        !detail::is_qm_point_mass(config.seller.strategic_strategy[0]) &&
        !detail::is_qm_point_mass(config.seller.strategic_strategy[1]);
    return config;
}

// Effort distribution of the commitment type: the q_M point mass.
inline std::vector<double> commitment_strategy(const GameConfig& config) {
    std::vector<double> v(static_cast<std::size_t>(config.signal_model.num_efforts()), 0.0);
    v.back() = 1.0;
    return v;
}

}  // namespace peerpred
