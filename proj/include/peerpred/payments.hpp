// Minimal-budget payment schemes. Builds the 4-variable payment LP for one
// buyer (two honesty rows, two interim-IR rows, four nonnegativity rows),
// solves it with the dense simplex, cross-checks via exhaustive vertex
// enumeration, and offers the constructive scoring-rule scheme as an
// independent feasible point.
//
// Variable order everywhere: x = (tau(l,l), tau(l,h), tau(h,l), tau(h,h)),
// with tau(own report, peer report); x index = 2*own + peer.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "peerpred/beliefs.hpp"
#include "peerpred/model.hpp"
#include "peerpred/simplex.hpp"

namespace peerpred {

// |g(h|h) - g(h|l)| below this is treated as LP-infeasible rather than solved
// with astronomically large payments.
inline constexpr double kFeasibilityTol = 1e-9;

// Slack threshold (relative to max(1,|rhs|)) under which a constraint is
// reported as binding; also the feasibility slack allowed by the vertex
// enumeration route.
inline constexpr double kBindingTol = 1e-9;

struct PaymentScheme {
    int buyer = 1;
    std::array<std::array<double, 2>, 2> tau{};  // tau[own report][peer report]
    double budget = 0.0;

    double of(Signal own_report, Signal peer_report) const {
        return tau[static_cast<int>(own_report)][static_cast<int>(peer_report)];
    }

    bool operator==(const PaymentScheme&) const = default;
};

enum class FeasibilityReason { OK, PRIOR_DEGENERATE, STRATEGY_DEGENERATE, G_GAP_BELOW_TOLERANCE };

inline const char* to_string(FeasibilityReason r) {
    switch (r) {
        case FeasibilityReason::OK: return "OK";
        case FeasibilityReason::PRIOR_DEGENERATE: return "PRIOR_DEGENERATE";
        case FeasibilityReason::STRATEGY_DEGENERATE: return "STRATEGY_DEGENERATE";
        case FeasibilityReason::G_GAP_BELOW_TOLERANCE: return "G_GAP_BELOW_TOLERANCE";
    }
    return "UNKNOWN";
}

struct FeasibilityReport {
    bool feasible = false;
    double g_gap = 0.0;  // g(h|h) - g(h|l), signed
    FeasibilityReason reason = FeasibilityReason::G_GAP_BELOW_TOLERANCE;

    bool operator==(const FeasibilityReport&) const = default;
};

class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(FeasibilityReport report)
        : std::runtime_error(std::string("payment LP infeasible: ") + to_string(report.reason)),
          report_(report) {}

    const FeasibilityReport& report() const { return report_; }

private:
    FeasibilityReport report_;
};

// Belief-level check: only the g-gap is observable here.
inline FeasibilityReport check_feasibility(const BeliefSet& beliefs) {
    FeasibilityReport r;
    r.g_gap = beliefs.g_gap();
    r.feasible = std::abs(r.g_gap) >= kFeasibilityTol;
    r.reason = r.feasible ? FeasibilityReason::OK : FeasibilityReason::G_GAP_BELOW_TOLERANCE;
    return r;
}

// Config-level check distinguishing the structural causes of a collapsed gap
// (degenerate prior; a strategic strategy equal to the commitment point mass,
// which makes the types indistinguishable for one side of the correlation)
// from plain numerical near-collapse.
inline FeasibilityReport check_feasibility(const GameConfig& config, int buyer) {
    FeasibilityReport r;
    r.g_gap = belief_set(config, buyer).g_gap();
    double prior = config.seller.commitment_prior;
    if (prior <= 0.0 || prior >= 1.0) {
        r.feasible = false;
        r.reason = FeasibilityReason::PRIOR_DEGENERATE;
        return r;
    }
    if (detail::is_qm_point_mass(config.seller.strategy(buyer)) ||
        detail::is_qm_point_mass(config.seller.strategy(peer_of(buyer)))) {
        r.feasible = false;
        r.reason = FeasibilityReason::STRATEGY_DEGENERATE;
        return r;
    }
    r.feasible = std::abs(r.g_gap) >= kFeasibilityTol;
    r.reason = r.feasible ? FeasibilityReason::OK : FeasibilityReason::G_GAP_BELOW_TOLERANCE;
    return r;
}

struct LPInstance {
    int buyer = 1;
    std::array<double, 4> objective{};  // budget weights Pr(s_j) * g(s_k|s_j)
    std::vector<lp::Constraint> rows;   // 8 rows in the fixed order below
    BeliefSet beliefs;
    EconomicParams econ;
    FeasibilityReport feasibility;
};

inline const std::array<const char*, 8>& lp_row_names() {
    static const std::array<const char*, 8> names = {
        "honesty_given_low", "honesty_given_high", "ir_given_low", "ir_given_high",
        "nonneg_ll",         "nonneg_lh",          "nonneg_hl",    "nonneg_hh"};
    return names;
}

namespace detail {

inline LPInstance assemble_lp(const BeliefSet& beliefs, const EconomicParams& econ,
                              const FeasibilityReport& feasibility) {
    LPInstance lp;
    lp.buyer = beliefs.buyer;
    lp.beliefs = beliefs;
    lp.econ = econ;
    lp.feasibility = feasibility;

    const double g_ll = beliefs.g_of(Signal::low, Signal::low);
    const double g_hl = beliefs.g_of(Signal::high, Signal::low);
    const double g_lh = beliefs.g_of(Signal::low, Signal::high);
    const double g_hh = beliefs.g_of(Signal::high, Signal::high);
    const double p_h = beliefs.signal_prior_high;
    const double p_l = 1.0 - p_h;

    lp.objective = {p_l * g_ll, p_l * g_hl, p_h * g_lh, p_h * g_hh};

    lp.rows.reserve(8);
    // True signal l, misreport h: expected pay of reporting l beats reporting
    // h by at least the benefit of the false h report plus the margin.
    lp.rows.push_back({{g_ll, g_hl, -g_ll, -g_hl}, lp::Relation::greater_equal,
                       econ.delta(Signal::high) + econ.epsilon});
    // True signal h, misreport l.
    lp.rows.push_back({{-g_lh, -g_hh, g_lh, g_hh}, lp::Relation::greater_equal,
                       econ.delta(Signal::low) + econ.epsilon});
    // Interim IR per received signal under truthful reporting.
    lp.rows.push_back({{g_ll, g_hl, 0.0, 0.0}, lp::Relation::greater_equal,
                       econ.cost_bound + econ.epsilon});
    lp.rows.push_back({{0.0, 0.0, g_lh, g_hh}, lp::Relation::greater_equal,
                       econ.cost_bound + econ.epsilon});
    // Nonnegativity, kept as explicit rows so the vertex enumeration and the
    // binding-constraint report see the full system.
    for (int j = 0; j < 4; ++j) {
        std::vector<double> unit(4, 0.0);
        unit[static_cast<std::size_t>(j)] = 1.0;
        lp.rows.push_back({unit, lp::Relation::greater_equal, 0.0});
    }
    return lp;
}

}  // namespace detail

inline LPInstance build_lp(const GameConfig& config, int buyer) {
    return detail::assemble_lp(belief_set(config, buyer), config.econ,
                               check_feasibility(config, buyer));
}

inline LPInstance build_lp(const BeliefSet& beliefs, const EconomicParams& econ) {
    return detail::assemble_lp(beliefs, econ, check_feasibility(beliefs));
}

// Expected payment when reporting `report` after having received `received`,
// with a truthful peer.
inline double expected_payment(const PaymentScheme& scheme, const BeliefSet& beliefs,
                               Signal report, Signal received) {
    return beliefs.g_of(Signal::low, received) * scheme.of(report, Signal::low) +
           beliefs.g_of(Signal::high, received) * scheme.of(report, Signal::high);
}

// Ex-ante expected payout under truthful play: the LP objective.
inline double expected_budget(const BeliefSet& beliefs, const PaymentScheme& scheme) {
    const double p_h = beliefs.signal_prior_high;
    return (1.0 - p_h) * expected_payment(scheme, beliefs, Signal::low, Signal::low) +
           p_h * expected_payment(scheme, beliefs, Signal::high, Signal::high);
}

inline std::array<double, 8> constraint_slacks(const LPInstance& lp, const PaymentScheme& scheme) {
    const std::array<double, 4> x = {scheme.tau[0][0], scheme.tau[0][1], scheme.tau[1][0],
                                     scheme.tau[1][1]};
    std::array<double, 8> slacks{};
    for (std::size_t i = 0; i < 8; ++i) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < 4; ++j) lhs += lp.rows[i].coeff[j] * x[j];
        slacks[i] = lhs - lp.rows[i].rhs;
    }
    return slacks;
}

inline std::vector<std::string> binding_constraints(const LPInstance& lp,
                                                    const PaymentScheme& scheme) {
    auto slacks = constraint_slacks(lp, scheme);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < 8; ++i) {
        double scale = std::max(1.0, std::abs(lp.rows[i].rhs));
        if (std::abs(slacks[i]) <= kBindingTol * scale) names.push_back(lp_row_names()[i]);
    }
    return names;
}

namespace detail {

inline PaymentScheme scheme_from_point(const LPInstance& lp, const std::array<double, 4>& x) {
    PaymentScheme s;
    s.buyer = lp.buyer;
    for (int own = 0; own < 2; ++own)
        for (int peer = 0; peer < 2; ++peer) {
            double v = x[static_cast<std::size_t>(2 * own + peer)];
            s.tau[own][peer] = v == 0.0 ? 0.0 : v;  // normalizes -0.0
        }
    s.budget = 0.0;
    for (std::size_t j = 0; j < 4; ++j) s.budget += lp.objective[j] * x[j];
    return s;
}

}  // namespace detail

// Simplex route. Gated on the embedded feasibility report so near-collapsed
// gaps surface as InfeasibleError instead of schemes with astronomical
// payments.
inline PaymentScheme solve_lp(const LPInstance& lp) {
    if (!lp.feasibility.feasible) throw InfeasibleError(lp.feasibility);

    std::vector<double> c(lp.objective.begin(), lp.objective.end());
    // Nonnegativity is native to the solver; only the structural rows go in.
    std::vector<lp::Constraint> rows(lp.rows.begin(), lp.rows.begin() + 4);
    lp::Solution sol = lp::solve(c, rows);
    if (sol.status == lp::SolveStatus::infeasible) {
        FeasibilityReport r = lp.feasibility;
        r.feasible = false;
        if (r.reason == FeasibilityReason::OK) r.reason = FeasibilityReason::G_GAP_BELOW_TOLERANCE;
        throw InfeasibleError(r);
    }
    if (sol.status != lp::SolveStatus::optimal)
        throw std::runtime_error("payment LP is bounded by construction; solver disagreed");
    return detail::scheme_from_point(lp, {sol.x[0], sol.x[1], sol.x[2], sol.x[3]});
}

namespace detail {

// Gaussian elimination with partial pivoting on a 4x4 system.
inline bool solve4(std::array<std::array<double, 4>, 4> a, std::array<double, 4> b,
                   std::array<double, 4>& out) {
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-12) return false;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (int r = col + 1; r < 4; ++r) {
            double factor = a[r][col] / a[col][col];
            if (factor == 0.0) continue;
            for (int k = col; k < 4; ++k) a[r][k] -= factor * a[col][k];
            b[r] -= factor * b[col];
        }
    }
    for (int r = 3; r >= 0; --r) {
        double v = b[r];
        for (int k = r + 1; k < 4; ++k) v -= a[r][k] * out[k];
        out[r] = v / a[r][r];
    }
    return true;
}

}  // namespace detail

// Exhaustive ground-truth route: every 4-subset of the 8 rows is made tight,
// the resulting vertex kept if it satisfies the full system. 70 subsets, so
// exhaustiveness is cheap and the minimum over vertices is the true optimum.
inline PaymentScheme vertex_enumeration_oracle(const LPInstance& lp) {
    bool found = false;
    double best_obj = 0.0;
    std::array<double, 4> best_x{};

    std::array<int, 4> idx{};
    for (idx[0] = 0; idx[0] < 8; ++idx[0])
        for (idx[1] = idx[0] + 1; idx[1] < 8; ++idx[1])
            for (idx[2] = idx[1] + 1; idx[2] < 8; ++idx[2])
                for (idx[3] = idx[2] + 1; idx[3] < 8; ++idx[3]) {
                    std::array<std::array<double, 4>, 4> a{};
                    std::array<double, 4> b{};
                    for (int r = 0; r < 4; ++r) {
                        for (int k = 0; k < 4; ++k)
                            a[r][k] = lp.rows[static_cast<std::size_t>(idx[r])]
                                          .coeff[static_cast<std::size_t>(k)];
                        b[r] = lp.rows[static_cast<std::size_t>(idx[r])].rhs;
                    }
                    std::array<double, 4> x{};
                    if (!detail::solve4(a, b, x)) continue;

                    bool feasible = true;
                    for (const auto& row : lp.rows) {
                        double lhs = 0.0;
                        for (std::size_t k = 0; k < 4; ++k) lhs += row.coeff[k] * x[k];
                        double scale = std::max(1.0, std::abs(row.rhs));
                        if (lhs < row.rhs - kBindingTol * scale) {
                            feasible = false;
                            break;
                        }
                    }
                    if (!feasible) continue;

                    double obj = 0.0;
                    for (std::size_t k = 0; k < 4; ++k) obj += lp.objective[k] * x[k];
                    if (!found || obj < best_obj) {
                        found = true;
                        best_obj = obj;
                        best_x = x;
                    }
                }

    if (!found) {
        FeasibilityReport r = lp.feasibility;
        r.feasible = false;
        if (r.reason == FeasibilityReason::OK) r.reason = FeasibilityReason::G_GAP_BELOW_TOLERANCE;
        throw InfeasibleError(r);
    }
    for (auto& v : best_x) v = std::max(v, 0.0);  // clears 1e-9-scale slack dust
    return detail::scheme_from_point(lp, best_x);
}

// The scoring-rule construction: reward a high own report by 1 - g' when the
// peer also reports high and by -g' otherwise, where g' is the midpoint of
// g(h|h) and g(h|l) (mirrored when the gap is negative); zero out the low-
// report row, scale until the honesty margin covers the lying benefit plus
// the strictness margin, then shift everything into the nonnegative range
// demanded by interim IR.
inline PaymentScheme constructive_from_beliefs(const BeliefSet& beliefs,
                                               const EconomicParams& econ) {
    FeasibilityReport report = check_feasibility(beliefs);
    if (!report.feasible) throw InfeasibleError(report);

    const double g_hh = beliefs.g_of(Signal::high, Signal::high);
    const double g_hl = beliefs.g_of(Signal::high, Signal::low);
    const double g_mid = 0.5 * (g_hh + g_hl);
    const double margin = 0.5 * std::abs(g_hh - g_hl);  // honesty margin of the raw scheme
    const double delta_max = std::max(econ.delta_l, econ.delta_h);
    const double gamma = std::max(1.0, (delta_max + econ.epsilon) / margin);

    double tau_hh, tau_hl;
    if (g_hh > g_hl) {
        tau_hh = gamma * (1.0 - g_mid);
        tau_hl = gamma * (-g_mid);
    } else {
        tau_hh = gamma * (g_mid - 1.0);
        tau_hl = gamma * g_mid;
    }

    double lowest = std::min({tau_hh, tau_hl, 0.0});
    double shift = -lowest + econ.cost_bound + econ.epsilon;

    PaymentScheme s;
    s.buyer = beliefs.buyer;
    s.tau[0][0] = shift;
    s.tau[0][1] = shift;
    s.tau[1][0] = tau_hl + shift;
    s.tau[1][1] = tau_hh + shift;
    s.budget = expected_budget(beliefs, s);
    return s;
}

inline PaymentScheme constructive_scheme(const GameConfig& config, int buyer) {
    FeasibilityReport report = check_feasibility(config, buyer);
    if (!report.feasible) throw InfeasibleError(report);
    return constructive_from_beliefs(belief_set(config, buyer), config.econ);
}

}  // namespace peerpred
