// Config loading and JSON serialization.
//
// Config files are strict: unknown keys anywhere are rejected, as are missing
// keys and wrong types, with one ValidationError carrying every violation.
// Serializers emit ordered JSON so output is byte-stable across runs.
//
// Key conventions (also in the README): belief entries g_kj mean
// Pr(peer signal k | own signal j), matching the conditional notation, while
// payment entries tau_jk mean tau(own report j, peer report k).
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "peerpred/beliefs.hpp"
#include "peerpred/model.hpp"
#include "peerpred/payments.hpp"
#include "peerpred/sim.hpp"
#include "peerpred/verify.hpp"

namespace peerpred {

using json = nlohmann::ordered_json;

// Unreadable files and malformed JSON. Distinct from ValidationError, which
// covers well-formed JSON with bad content.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

class ConfigReader {
public:
    void require_keys(const json& obj, const std::string& scope,
                      std::initializer_list<const char*> allowed) {
        for (const auto& item : obj.items()) {
            bool known = false;
            for (const char* key : allowed)
                if (item.key() == key) known = true;
            if (!known) flag(ValidationCode::UNKNOWN_KEY, scope + "." + item.key());
        }
    }

    const json* object(const json& parent, const std::string& scope, const char* key) {
        const json* v = fetch(parent, scope, key);
        if (v && !v->is_object()) {
            flag(ValidationCode::BAD_TYPE, scope + "." + key + " must be an object");
            return nullptr;
        }
        return v;
    }

    double number(const json* parent, const std::string& scope, const char* key) {
        if (!parent) return 0.0;
        const json* v = fetch(*parent, scope, key);
        if (!v) return 0.0;
        if (!v->is_number()) {
            flag(ValidationCode::BAD_TYPE, scope + "." + key + " must be a number");
            return 0.0;
        }
        return v->get<double>();
    }

    std::vector<double> number_array(const json* parent, const std::string& scope,
                                     const char* key) {
        if (!parent) return {};
        const json* v = fetch(*parent, scope, key);
        if (!v) return {};
        if (!v->is_array()) {
            flag(ValidationCode::BAD_TYPE, scope + "." + key + " must be an array of numbers");
            return {};
        }
        std::vector<double> out;
        out.reserve(v->size());
        for (const auto& entry : *v) {
            if (!entry.is_number()) {
                flag(ValidationCode::BAD_TYPE, scope + "." + key + " must be an array of numbers");
                return {};
            }
            out.push_back(entry.get<double>());
        }
        return out;
    }

    void throw_if_failed() {
        if (codes_.empty()) return;
        std::string detail;
        for (std::size_t i = 0; i < notes_.size(); ++i) {
            if (i > 0) detail += "; ";
            detail += notes_[i];
        }
        throw ValidationError(std::move(codes_), detail);
    }

private:
    const json* fetch(const json& parent, const std::string& scope, const char* key) {
        auto it = parent.find(key);
        if (it == parent.end()) {
            flag(ValidationCode::MISSING_KEY, scope + "." + key + " is required");
            return nullptr;
        }
        return &*it;
    }

    void flag(ValidationCode code, std::string note) {
        codes_.push_back(code);
        notes_.push_back(std::move(note));
    }

    std::vector<ValidationCode> codes_;
    std::vector<std::string> notes_;
};

}  // namespace detail

// Builds and validates a GameConfig from parsed JSON. Structural problems
// (missing/unknown keys, wrong types) and semantic problems (monotonicity,
// simplex sums, ...) both surface as ValidationError.
inline GameConfig config_from_json(const json& root) {
    if (!root.is_object())
        throw ValidationError({ValidationCode::BAD_TYPE}, "config root must be an object");
    detail::ConfigReader reader;
    reader.require_keys(root, "config", {"signal_model", "seller", "econ"});

    const json* signal_model = reader.object(root, "config", "signal_model");
    const json* seller = reader.object(root, "config", "seller");
    const json* econ = reader.object(root, "config", "econ");
    if (signal_model)
        reader.require_keys(*signal_model, "signal_model", {"f_high"});
    if (seller)
        reader.require_keys(*seller, "seller",
                            {"commitment_prior", "strategy_buyer1", "strategy_buyer2"});
    if (econ)
        reader.require_keys(*econ, "econ", {"delta_l", "delta_h", "cost_bound", "epsilon"});

    GameConfig config;
    config.signal_model.high_signal_prob = reader.number_array(signal_model, "signal_model", "f_high");
    config.seller.commitment_prior = reader.number(seller, "seller", "commitment_prior");
    config.seller.strategic_strategy[0] = reader.number_array(seller, "seller", "strategy_buyer1");
    config.seller.strategic_strategy[1] = reader.number_array(seller, "seller", "strategy_buyer2");
    config.econ.delta_l = reader.number(econ, "econ", "delta_l");
    config.econ.delta_h = reader.number(econ, "econ", "delta_h");
    config.econ.cost_bound = reader.number(econ, "econ", "cost_bound");
    config.econ.epsilon = reader.number(econ, "econ", "epsilon");

    reader.throw_if_failed();
    return validate(config);
}

inline GameConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(root);
}

inline GameConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("cannot read config file: " + path);
    return parse_config(buffer.str());
}

inline json config_to_json(const GameConfig& config) {
    return json{{"signal_model", {{"f_high", config.signal_model.high_signal_prob}}},
                {"seller",
                 {{"commitment_prior", config.seller.commitment_prior},
                  {"strategy_buyer1", config.seller.strategic_strategy[0]},
                  {"strategy_buyer2", config.seller.strategic_strategy[1]}}},
                {"econ",
                 {{"delta_l", config.econ.delta_l},
                  {"delta_h", config.econ.delta_h},
                  {"cost_bound", config.econ.cost_bound},
                  {"epsilon", config.econ.epsilon}}}};
}

inline json to_json(const BeliefSet& b) {
    return json{{"buyer", b.buyer},
                {"effort_prior", b.effort_prior},
                {"signal_prior_high", b.signal_prior_high},
                {"signal_high_given_commitment", b.signal_high_given_commitment},
                {"signal_high_given_strategic", b.signal_high_given_strategic},
                {"type_posterior_given_high", b.type_posterior_given_high},
                {"type_posterior_given_low", b.type_posterior_given_low},
                {"g_ll", b.g_of(Signal::low, Signal::low)},
                {"g_hl", b.g_of(Signal::high, Signal::low)},
                {"g_lh", b.g_of(Signal::low, Signal::high)},
                {"g_hh", b.g_of(Signal::high, Signal::high)},
                {"g_gap", b.g_gap()}};
}

inline json to_json(const FeasibilityReport& r) {
    return json{{"feasible", r.feasible}, {"g_gap", r.g_gap}, {"reason", to_string(r.reason)}};
}

inline json to_json(const PaymentScheme& s) {
    return json{{"buyer", s.buyer},
                {"tau",
                 {{"ll", s.tau[0][0]},
                  {"lh", s.tau[0][1]},
                  {"hl", s.tau[1][0]},
                  {"hh", s.tau[1][1]}}},
                {"budget", s.budget}};
}

inline json to_json(const TruthfulnessCertificate& cert) {
    json strategies = json::array();
    for (const auto& eval : cert.strategies) {
        strategies.push_back(json{{"on_low", to_string(eval.strategy.on_low)},
                                  {"on_high", to_string(eval.strategy.on_high)},
                                  {"utility_given_low", eval.interim_utility[0]},
                                  {"utility_given_high", eval.interim_utility[1]},
                                  {"ex_ante_utility", eval.ex_ante_utility}});
    }
    return json{{"buyer", cert.buyer},
                {"honest_is_strict_best", cert.honest_is_strict_best},
                {"honesty_margins",
                 {{"given_low", cert.honesty_margins[0]}, {"given_high", cert.honesty_margins[1]}}},
                {"ir_satisfied", cert.ir_satisfied},
                {"ir_slacks",
                 {{"given_low", cert.ir_slacks[0]}, {"given_high", cert.ir_slacks[1]}}},
                {"strategies", strategies}};
}

inline json to_json(const EquilibriumReport& report) {
    return json{{"truthful_equilibrium", report.truthful_equilibrium},
                {"seller_side_holds_by_assumption", report.seller_side_holds_by_assumption},
                {"buyer1",
                 {{"feasibility", to_json(report.feasibility[0])},
                  {"certificate", to_json(report.certificates[0])}}},
                {"buyer2",
                 {{"feasibility", to_json(report.feasibility[1])},
                  {"certificate", to_json(report.certificates[1])}}}};
}

inline json to_json(const GameRecord& rec) {
    return json{{"game", rec.game_index},
                {"prior", rec.prior},
                {"prior_log_odds", rec.prior_log_odds},
                {"degenerate_prior", rec.degenerate_prior},
                {"seller_efforts", {rec.efforts[0] + 1, rec.efforts[1] + 1}},
                {"signals", {to_string(rec.signals[0]), to_string(rec.signals[1])}},
                {"reports", {to_string(rec.reports[0]), to_string(rec.reports[1])}},
                {"payments", {rec.payments[0], rec.payments[1]}},
                {"game_budget", rec.game_budget},
                {"scheme_budgets", {rec.scheme_budget[0], rec.scheme_budget[1]}},
                {"honesty_margins", {rec.honesty_margin[0], rec.honesty_margin[1]}},
                {"posterior", rec.posterior},
                {"posterior_log_odds", rec.posterior_log_odds}};
}

inline json to_json(const SimSummary& s) {
    return json{{"num_games", s.num_games},
                {"seller_type", to_string(s.seller_type)},
                {"cumulative_budget", s.cumulative_budget},
                {"mean_game_budget", s.mean_game_budget},
                {"high_signal_frequency_buyer1", s.high_signal_frequency[0]},
                {"high_signal_frequency_buyer2", s.high_signal_frequency[1]},
                {"pooled_high_frequency", s.pooled_high_frequency},
                {"final_posterior", s.final_posterior},
                {"final_posterior_log_odds", s.final_posterior_log_odds},
                {"posterior_quantiles",
                 {{"min", s.posterior_min},
                  {"q25", s.posterior_q25},
                  {"median", s.posterior_median},
                  {"q75", s.posterior_q75},
                  {"max", s.posterior_max}}},
                {"min_honesty_margin", s.min_honesty_margin},
                {"mean_honesty_margin", s.mean_honesty_margin}};
}

}  // namespace peerpred
