#include <catch2/catch_amalgamated.hpp>

#include <string>

#include <peerpred/io.hpp>

#include "support/run_cli.hpp"

using namespace peerpred;

namespace {

const char* kCanonicalText = R"({
  "signal_model": {"f_high": [0.3, 0.9]},
  "seller": {
    "commitment_prior": 0.2,
    "strategy_buyer1": [0.2, 0.8],
    "strategy_buyer2": [0.2, 0.8]
  },
  "econ": {"delta_l": 0.0, "delta_h": 0.0, "cost_bound": 0.0, "epsilon": 0.01}
})";

template <typename Fn>
ValidationError capture(Fn&& fn) {
    try {
        fn();
    } catch (const ValidationError& e) {
        return e;
    }
    FAIL("expected a ValidationError");
    return ValidationError({});
}

}  // namespace

TEST_CASE("a well-formed config parses into the expected fields") {
    GameConfig c = parse_config(kCanonicalText);
    CHECK(c.signal_model.high_signal_prob == std::vector<double>{0.3, 0.9});
    CHECK(c.seller.commitment_prior == 0.2);
    CHECK(c.seller.strategic_strategy[0] == std::vector<double>{0.2, 0.8});
    CHECK(c.seller.strategic_strategy[1] == std::vector<double>{0.2, 0.8});
    CHECK(c.econ.delta_l == 0.0);
    CHECK(c.econ.delta_h == 0.0);
    CHECK(c.econ.cost_bound == 0.0);
    CHECK(c.econ.epsilon == 0.01);
    CHECK(c.seller.is_nondegenerate);
}

TEST_CASE("configs load from disk") {
    GameConfig c = load_config(testcli::config_dir() + "/canonical.json");
    CHECK(c == parse_config(kCanonicalText));

    GameConfig a = load_config(testcli::config_dir() + "/asymmetric.json");
    CHECK(a.seller.strategic_strategy[1] == std::vector<double>{0.5, 0.5});
}

TEST_CASE("file problems and malformed JSON raise io errors") {
    CHECK_THROWS_AS(load_config("/nonexistent/peerpred.json"), IoError);
    CHECK_THROWS_AS(parse_config("{\"signal_model\": "), IoError);
    CHECK_THROWS_AS(parse_config(""), IoError);
    CHECK_THROWS_WITH(parse_config("not json at all"),
                      Catch::Matchers::ContainsSubstring("not valid JSON"));
}

TEST_CASE("a non-object root is a type violation, not an io error") {
    ValidationError e = capture([] { config_from_json(json::array({1, 2, 3})); });
    CHECK(e.has(ValidationCode::BAD_TYPE));
}

TEST_CASE("unknown keys are rejected at every level") {
    json root = json::parse(kCanonicalText);
    SECTION("at the root") { root["extra"] = 1; }
    SECTION("inside signal_model") { root["signal_model"]["bias"] = 0.5; }
    SECTION("inside seller") { root["seller"]["strategy_buyer3"] = {0.5, 0.5}; }
    SECTION("inside econ") { root["econ"]["budget"] = 10.0; }
    ValidationError e = capture([&] { config_from_json(root); });
    CHECK(e.has(ValidationCode::UNKNOWN_KEY));
}

TEST_CASE("missing keys are reported with their path") {
    json root = json::parse(kCanonicalText);
    root["econ"].erase("epsilon");
    ValidationError e = capture([&] { config_from_json(root); });
    CHECK(e.has(ValidationCode::MISSING_KEY));
    CHECK(std::string(e.what()).find("econ.epsilon") != std::string::npos);
}

TEST_CASE("wrong value types are rejected") {
    json root = json::parse(kCanonicalText);
    SECTION("string where a number belongs") { root["seller"]["commitment_prior"] = "0.2"; }
    SECTION("number where an object belongs") { root["econ"] = 3; }
    SECTION("string inside a numeric array") { root["signal_model"]["f_high"] = {0.3, "0.9"}; }
    SECTION("object where an array belongs") {
        root["seller"]["strategy_buyer1"] = json{{"low", 0.2}, {"high", 0.8}};
    }
    ValidationError e = capture([&] { config_from_json(root); });
    CHECK(e.has(ValidationCode::BAD_TYPE));
}

TEST_CASE("structural violations are collected, not reported one at a time") {
    json root = json::parse(kCanonicalText);
    root["extra"] = true;
    root["econ"].erase("delta_l");
    root["seller"]["commitment_prior"] = "high";
    ValidationError e = capture([&] { config_from_json(root); });
    CHECK(e.has(ValidationCode::UNKNOWN_KEY));
    CHECK(e.has(ValidationCode::MISSING_KEY));
    CHECK(e.has(ValidationCode::BAD_TYPE));
    CHECK(e.codes().size() >= 3);
}

TEST_CASE("semantic validation runs on structurally clean configs") {
    json root = json::parse(kCanonicalText);
    root["signal_model"]["f_high"] = {0.9, 0.3};
    ValidationError e = capture([&] { config_from_json(root); });
    CHECK(e.has(ValidationCode::NON_MONOTONE_F));
}

TEST_CASE("config serialization round-trips exactly") {
    GameConfig c = parse_config(kCanonicalText);
    json j = config_to_json(c);
    CHECK(config_from_json(j) == c);

    // Doubles with no short decimal form must survive dump + reparse.
    GameConfig fine = c;
    fine.signal_model.high_signal_prob = {1.0 / 3.0, 2.0 / 3.0};
    fine.seller.commitment_prior = 0.1 + 0.2;
    fine.seller.strategic_strategy[0] = {1.0 / 3.0, 2.0 / 3.0};
    fine.econ.epsilon = 1e-3 * (1.0 / 7.0);
    fine = validate(fine);
    GameConfig back = parse_config(config_to_json(fine).dump());
    CHECK(back == fine);

    // Serialization is byte-stable and keeps a fixed key order.
    std::string once = config_to_json(c).dump(2);
    std::string twice = config_to_json(parse_config(once)).dump(2);
    CHECK(once == twice);
    CHECK(once.find("signal_model") < once.find("seller"));
    CHECK(once.find("seller") < once.find("econ"));
}

TEST_CASE("belief serialization follows the peer-given-own key convention") {
    GameConfig c = parse_config(kCanonicalText);
    BeliefSet b = belief_set(c, 1);
    json j = to_json(b);
    CHECK(j["buyer"] == 1);
    CHECK(j["g_hh"] == b.g_of(Signal::high, Signal::high));
    CHECK(j["g_hl"] == b.g_of(Signal::high, Signal::low));
    CHECK(j["g_lh"] == b.g_of(Signal::low, Signal::high));
    CHECK(j["g_ll"] == b.g_of(Signal::low, Signal::low));
    CHECK(j["g_hh"].get<double>() == Catch::Approx(2703.0 / 3350.0).epsilon(1e-12));
    CHECK(j["g_hl"].get<double>() == Catch::Approx(1941.0 / 2450.0).epsilon(1e-12));
    CHECK(j["g_gap"] == b.g_gap());
    CHECK(j["signal_prior_high"] == b.signal_prior_high);
    CHECK(j["type_posterior_given_high"] == b.type_posterior_given_high);
}

TEST_CASE("payment serialization indexes tau by own report then peer report") {
    PaymentScheme s;
    s.buyer = 2;
    s.tau = {{{1.0, 2.0}, {3.0, 4.0}}};
    s.budget = 10.0;
    json j = to_json(s);
    CHECK(j["buyer"] == 2);
    CHECK(j["tau"]["ll"] == 1.0);  // own low, peer low
    CHECK(j["tau"]["lh"] == 2.0);  // own low, peer high
    CHECK(j["tau"]["hl"] == 3.0);  // own high, peer low
    CHECK(j["tau"]["hh"] == 4.0);  // own high, peer high
    CHECK(j["budget"] == 10.0);
}

TEST_CASE("feasibility and certificate serialization carry their verdicts") {
    GameConfig c = parse_config(kCanonicalText);
    json f = to_json(check_feasibility(c, 1));
    CHECK(f["feasible"] == true);
    CHECK(f["reason"] == "OK");
    CHECK(f["g_gap"].get<double>() == Catch::Approx(48.0 / 3283.0).epsilon(1e-12));

    GameConfig flat = c;
    flat.seller.commitment_prior = 1.0;
    flat = validate(flat);
    json bad = to_json(check_feasibility(flat, 1));
    CHECK(bad["feasible"] == false);
    CHECK(bad["reason"] == "PRIOR_DEGENERATE");

    EquilibriumReport rep =
        equilibrium_condition_report(c, solve_lp(build_lp(c, 1)), solve_lp(build_lp(c, 2)));
    json r = to_json(rep);
    CHECK(r["truthful_equilibrium"] == true);
    CHECK(r["seller_side_holds_by_assumption"] == true);
    CHECK(r["buyer1"]["certificate"]["honest_is_strict_best"] == true);
    CHECK(r["buyer1"]["certificate"]["honesty_margins"]["given_low"].get<double>() ==
          Catch::Approx(0.01).margin(1e-9));
    CHECK(r["buyer2"]["certificate"]["strategies"].size() == 4);
    CHECK(r["buyer1"]["feasibility"]["feasible"] == true);
}

TEST_CASE("game records serialize efforts one-based and signals as letters") {
    GameRecord rec;
    rec.game_index = 3;
    rec.prior = 0.25;
    rec.efforts = {0, 1};
    rec.signals = {Signal::low, Signal::high};
    rec.reports = rec.signals;
    rec.payments = {0.5, 1.5};
    rec.game_budget = 2.0;
    json j = to_json(rec);
    CHECK(j["game"] == 3);
    CHECK(j["seller_efforts"] == json::array({1, 2}));
    CHECK(j["signals"] == json::array({"l", "h"}));
    CHECK(j["reports"] == json::array({"l", "h"}));
    CHECK(j["payments"] == json::array({0.5, 1.5}));
    CHECK(j["game_budget"] == 2.0);
}

TEST_CASE("summary serialization exposes the run statistics") {
    GameConfig c = parse_config(kCanonicalText);
    SimConfig s;
    s.base = c;
    s.num_games = 25;
    s.seed = 4;
    s.type_mode = TypeMode::FIXED_COMMITMENT;
    s.resolve_payments = PaymentMode::FREEZE_FIRST_GAME;
    SimTrace trace = run_sequence(s);
    json j = to_json(summarize(trace));
    CHECK(j["num_games"] == 25);
    CHECK(j["seller_type"] == "commitment");
    CHECK(j["cumulative_budget"] == trace.cumulative_budget);
    CHECK(j["posterior_quantiles"]["min"].get<double>() <=
          j["posterior_quantiles"]["max"].get<double>());
    CHECK(j.contains("pooled_high_frequency"));
    CHECK(j.contains("mean_honesty_margin"));
}
