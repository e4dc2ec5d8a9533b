// peerpred: belief cascades, minimal-budget payment schemes, truthfulness
// certificates, parameter sweeps and seeded simulation for the two-buyer
// Feedback Game.
//
// Exit codes: 0 success, 2 validation/usage, 3 I/O, 4 infeasible.
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "peerpred/io.hpp"

namespace {

using peerpred::json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void print_kv(std::ostream& os, const std::string& key, const std::string& value) {
    os << key;
    for (std::size_t i = key.size(); i < 30; ++i) os << ' ';
    os << value << '\n';
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

struct GlobalOptions {
    std::string config_path;
    std::string output = "json";
    bool quiet = false;
};

void print_beliefs_text(const peerpred::BeliefSet& b) {
    print_kv(std::cout, "buyer", std::to_string(b.buyer));
    std::vector<std::string> prior;
    for (double p : b.effort_prior) prior.push_back(fmt(p));
    print_kv(std::cout, "effort_prior", join(prior, " "));
    print_kv(std::cout, "signal_prior_high", fmt(b.signal_prior_high));
    print_kv(std::cout, "signal_high_given_commitment", fmt(b.signal_high_given_commitment));
    print_kv(std::cout, "signal_high_given_strategic", fmt(b.signal_high_given_strategic));
    print_kv(std::cout, "type_posterior_given_high", fmt(b.type_posterior_given_high));
    print_kv(std::cout, "type_posterior_given_low", fmt(b.type_posterior_given_low));
    using peerpred::Signal;
    print_kv(std::cout, "g_ll", fmt(b.g_of(Signal::low, Signal::low)));
    print_kv(std::cout, "g_hl", fmt(b.g_of(Signal::high, Signal::low)));
    print_kv(std::cout, "g_lh", fmt(b.g_of(Signal::low, Signal::high)));
    print_kv(std::cout, "g_hh", fmt(b.g_of(Signal::high, Signal::high)));
    print_kv(std::cout, "g_gap", fmt(b.g_gap()));
}

int run_beliefs(const GlobalOptions& opt, int buyer) {
    peerpred::GameConfig config = peerpred::load_config(opt.config_path);
    peerpred::BeliefSet beliefs = peerpred::belief_set(config, buyer);
    if (opt.output == "json")
        std::cout << peerpred::to_json(beliefs).dump() << '\n';
    else
        print_beliefs_text(beliefs);
    return 0;
}

void print_scheme_text(const peerpred::PaymentScheme& s) {
    print_kv(std::cout, "  tau(l,l)", fmt(s.tau[0][0]));
    print_kv(std::cout, "  tau(l,h)", fmt(s.tau[0][1]));
    print_kv(std::cout, "  tau(h,l)", fmt(s.tau[1][0]));
    print_kv(std::cout, "  tau(h,h)", fmt(s.tau[1][1]));
    print_kv(std::cout, "  budget", fmt(s.budget));
}

int run_solve(const GlobalOptions& opt) {
    peerpred::GameConfig config = peerpred::load_config(opt.config_path);

    json out;
    bool all_feasible = true;
    double budget_sum = 0.0;
    std::vector<peerpred::PaymentScheme> schemes;
    std::vector<peerpred::LPInstance> lps;
    for (int buyer = 1; buyer <= 2; ++buyer) {
        lps.push_back(peerpred::build_lp(config, buyer));
        all_feasible = all_feasible && lps.back().feasibility.feasible;
    }
    for (int buyer = 1; buyer <= 2; ++buyer) {
        const auto& lp = lps[static_cast<std::size_t>(buyer - 1)];
        json side;
        side["feasibility"] = peerpred::to_json(lp.feasibility);
        if (all_feasible) {
            peerpred::PaymentScheme scheme = peerpred::solve_lp(lp);
            side["scheme"] = peerpred::to_json(scheme);
            side["binding_constraints"] = peerpred::binding_constraints(lp, scheme);
            budget_sum += scheme.budget;
            schemes.push_back(scheme);
        }
        out[buyer == 1 ? "buyer1" : "buyer2"] = side;
    }
    out["budget_sum"] = all_feasible ? json(budget_sum) : json(nullptr);

    if (opt.output == "json") {
        std::cout << out.dump() << '\n';
    } else {
        for (int buyer = 1; buyer <= 2; ++buyer) {
            const auto& lp = lps[static_cast<std::size_t>(buyer - 1)];
            std::cout << "buyer " << buyer << '\n';
            print_kv(std::cout, "  feasible", lp.feasibility.feasible ? "true" : "false");
            print_kv(std::cout, "  reason", to_string(lp.feasibility.reason));
            print_kv(std::cout, "  g_gap", fmt(lp.feasibility.g_gap));
            if (all_feasible) {
                const auto& scheme = schemes[static_cast<std::size_t>(buyer - 1)];
                print_scheme_text(scheme);
                print_kv(std::cout, "  binding",
                         join(peerpred::binding_constraints(lp, scheme), ", "));
            }
        }
        if (all_feasible) print_kv(std::cout, "budget_sum", fmt(budget_sum));
    }
    return all_feasible ? 0 : 4;
}

int run_verify(const GlobalOptions& opt) {
    peerpred::GameConfig config = peerpred::load_config(opt.config_path);
    peerpred::FeasibilityReport feas1 = peerpred::check_feasibility(config, 1);
    peerpred::FeasibilityReport feas2 = peerpred::check_feasibility(config, 2);

    if (!feas1.feasible || !feas2.feasible) {
        json out{{"truthful_equilibrium", false},
                 {"seller_side_holds_by_assumption", true},
                 {"buyer1", {{"feasibility", peerpred::to_json(feas1)}}},
                 {"buyer2", {{"feasibility", peerpred::to_json(feas2)}}}};
        if (opt.output == "json") {
            std::cout << out.dump() << '\n';
        } else {
            print_kv(std::cout, "truthful_equilibrium", "false");
            print_kv(std::cout, "buyer1 reason", to_string(feas1.reason));
            print_kv(std::cout, "buyer2 reason", to_string(feas2.reason));
        }
        return 4;
    }

    peerpred::PaymentScheme s1 = peerpred::solve_lp(peerpred::build_lp(config, 1));
    peerpred::PaymentScheme s2 = peerpred::solve_lp(peerpred::build_lp(config, 2));
    peerpred::EquilibriumReport report = peerpred::equilibrium_condition_report(config, s1, s2);

    if (opt.output == "json") {
        std::cout << peerpred::to_json(report).dump() << '\n';
    } else {
        print_kv(std::cout, "truthful_equilibrium",
                 report.truthful_equilibrium ? "true" : "false");
        print_kv(std::cout, "seller_side_holds_by_assumption", "true");
        for (int i = 0; i < 2; ++i) {
            const auto& cert = report.certificates[static_cast<std::size_t>(i)];
            std::cout << "buyer " << cert.buyer << '\n';
            print_kv(std::cout, "  honest_is_strict_best",
                     cert.honest_is_strict_best ? "true" : "false");
            print_kv(std::cout, "  margin_given_low", fmt(cert.honesty_margins[0]));
            print_kv(std::cout, "  margin_given_high", fmt(cert.honesty_margins[1]));
            print_kv(std::cout, "  ir_satisfied", cert.ir_satisfied ? "true" : "false");
            print_kv(std::cout, "  ir_slack_given_low", fmt(cert.ir_slacks[0]));
            print_kv(std::cout, "  ir_slack_given_high", fmt(cert.ir_slacks[1]));
        }
    }
    return 0;
}

// Applies one sweep grid value to a copy of the base config. The q_M sweep
// moves the remaining strategy mass proportionally (uniformly when there is
// none) so the vector stays a simplex.
peerpred::GameConfig apply_sweep_value(const peerpred::GameConfig& base, const std::string& param,
                                       double value) {
    peerpred::GameConfig config = base;
    if (param == "commitment_prior") {
        config.seller.commitment_prior = value;
    } else if (param == "epsilon") {
        config.econ.epsilon = value;
    } else if (param == "delta_l") {
        config.econ.delta_l = value;
    } else if (param == "delta_h") {
        config.econ.delta_h = value;
    } else if (param == "cost_bound") {
        config.econ.cost_bound = value;
    } else {  // strategic_qM_prob
        for (auto& strategy : config.seller.strategic_strategy) {
            double others = 0.0;
            for (std::size_t m = 0; m + 1 < strategy.size(); ++m) others += strategy[m];
            double target = 1.0 - value;
            for (std::size_t m = 0; m + 1 < strategy.size(); ++m) {
                strategy[m] = others > 0.0
                                  ? strategy[m] * (target / others)
                                  : target / static_cast<double>(strategy.size() - 1);
            }
            strategy.back() = value;
        }
    }
    return peerpred::validate(config);
}

int run_sweep(const GlobalOptions& opt, const std::string& param, double from, double to,
              int steps) {
    peerpred::GameConfig base = peerpred::load_config(opt.config_path);

    std::cout << "value,feasible,budget_buyer1,budget_buyer2,g_gap\n";
    for (int i = 0; i < steps; ++i) {
        double value = i == 0 ? from
                     : i == steps - 1
                         ? to
                         : from + (to - from) * static_cast<double>(i) /
                               static_cast<double>(steps - 1);
        peerpred::GameConfig config = apply_sweep_value(base, param, value);
        peerpred::LPInstance lp1 = peerpred::build_lp(config, 1);
        peerpred::LPInstance lp2 = peerpred::build_lp(config, 2);
        bool feasible = lp1.feasibility.feasible && lp2.feasibility.feasible;
        std::cout << fmt(value) << ',' << (feasible ? "true" : "false") << ',';
        if (feasible) {
            std::cout << fmt(peerpred::solve_lp(lp1).budget) << ','
                      << fmt(peerpred::solve_lp(lp2).budget);
        } else {
            std::cout << ',';
        }
        std::cout << ',' << fmt(lp1.feasibility.g_gap) << '\n';
    }
    return 0;
}

int run_simulate(const GlobalOptions& opt, int games, std::uint64_t seed,
                 const std::string& type_mode, const std::string& payment_mode) {
    peerpred::SimConfig sim;
    sim.base = peerpred::load_config(opt.config_path);
    sim.num_games = games;
    sim.seed = seed;
    sim.type_mode = type_mode == "fixed-commitment" ? peerpred::TypeMode::FIXED_COMMITMENT
                    : type_mode == "fixed-strategic" ? peerpred::TypeMode::FIXED_STRATEGIC
                                                     : peerpred::TypeMode::DRAW;
    sim.resolve_payments = payment_mode == "freeze-first-game"
                               ? peerpred::PaymentMode::FREEZE_FIRST_GAME
                               : peerpred::PaymentMode::SOLVE_EACH_GAME;

    peerpred::SimTrace trace = peerpred::run_sequence(sim);
    peerpred::SimSummary summary = peerpred::summarize(trace);

    if (opt.output == "json") {
        if (!opt.quiet)
            for (const auto& rec : trace.games) std::cout << peerpred::to_json(rec).dump() << '\n';
        json out{{"summary", peerpred::to_json(summary)}};
        out["summary"]["seed"] = trace.seed;
        out["summary"]["type_mode"] = to_string(trace.type_mode);
        out["summary"]["resolve_payments"] = to_string(trace.resolve_payments);
        std::cout << out.dump() << '\n';
    } else {
        if (!opt.quiet) {
            for (const auto& rec : trace.games) {
                std::cout << "game " << rec.game_index << ": prior " << fmt(rec.prior)
                          << " signals " << to_string(rec.signals[0]) << to_string(rec.signals[1])
                          << " payments " << fmt(rec.payments[0]) << ' ' << fmt(rec.payments[1])
                          << " posterior " << fmt(rec.posterior) << '\n';
            }
        }
        print_kv(std::cout, "num_games", std::to_string(summary.num_games));
        print_kv(std::cout, "seller_type", to_string(summary.seller_type));
        print_kv(std::cout, "seed", std::to_string(trace.seed));
        print_kv(std::cout, "cumulative_budget", fmt(summary.cumulative_budget));
        print_kv(std::cout, "mean_game_budget", fmt(summary.mean_game_budget));
        print_kv(std::cout, "high_freq_buyer1", fmt(summary.high_signal_frequency[0]));
        print_kv(std::cout, "high_freq_buyer2", fmt(summary.high_signal_frequency[1]));
        print_kv(std::cout, "pooled_high_frequency", fmt(summary.pooled_high_frequency));
        print_kv(std::cout, "final_posterior", fmt(summary.final_posterior));
        print_kv(std::cout, "final_posterior_log_odds", fmt(summary.final_posterior_log_odds));
        print_kv(std::cout, "min_honesty_margin", fmt(summary.min_honesty_margin));
        print_kv(std::cout, "mean_honesty_margin", fmt(summary.mean_honesty_margin));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimal-budget peer-prediction payments for the two-buyer Feedback Game"};
    app.require_subcommand(1);

    GlobalOptions opt;
    app.add_option("--config", opt.config_path, "Path to a JSON game config")->required();
    app.add_option("--output", opt.output, "Output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    app.add_flag("--quiet", opt.quiet, "Suppress per-game trace lines");

    int buyer = 1;
    CLI::App* cmd_beliefs = app.add_subcommand("beliefs", "Print one buyer's belief set");
    cmd_beliefs->add_option("--buyer", buyer, "Buyer index")
        ->check(CLI::IsMember({1, 2}))
        ->capture_default_str();

    CLI::App* cmd_solve =
        app.add_subcommand("solve", "Solve the minimal-budget payment LP for both buyers");

    CLI::App* cmd_verify =
        app.add_subcommand("verify", "Certify truthful reporting against the solved schemes");

    std::string sweep_param;
    double sweep_from = 0.0, sweep_to = 0.0;
    int sweep_steps = 2;
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "Sweep one parameter, CSV to stdout");
    cmd_sweep->add_option("--param", sweep_param, "Parameter to sweep")
        ->check(CLI::IsMember({"commitment_prior", "epsilon", "delta_l", "delta_h", "cost_bound",
                               "strategic_qM_prob"}))
        ->required();
    cmd_sweep->add_option("--from", sweep_from, "First grid value")->required();
    cmd_sweep->add_option("--to", sweep_to, "Last grid value")->required();
    cmd_sweep->add_option("--steps", sweep_steps, "Grid size (inclusive endpoints)")
        ->check(CLI::Range(2, 1000000))
        ->required();

    int games = 1;
    std::uint64_t seed = 0;
    std::string type_mode = "draw";
    std::string payment_mode = "solve-each-game";
    CLI::App* cmd_simulate =
        app.add_subcommand("simulate", "Run a seeded sequence of Feedback Games");
    cmd_simulate->add_option("--games", games, "Number of games")
        ->check(CLI::Range(1, 100000000))
        ->capture_default_str();
    cmd_simulate->add_option("--seed", seed, "Master RNG seed")->capture_default_str();
    cmd_simulate->add_option("--type", type_mode, "Seller type mode")
        ->check(CLI::IsMember({"draw", "fixed-commitment", "fixed-strategic"}))
        ->capture_default_str();
    cmd_simulate->add_option("--payments", payment_mode, "Payment resolution mode")
        ->check(CLI::IsMember({"solve-each-game", "freeze-first-game"}))
        ->capture_default_str();

    for (CLI::App* sub : {cmd_beliefs, cmd_solve, cmd_verify, cmd_sweep, cmd_simulate})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        // CLI11 returns 0 for --help/--version; everything else is usage.
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_beliefs->parsed()) return run_beliefs(opt, buyer);
        if (cmd_solve->parsed()) return run_solve(opt);
        if (cmd_verify->parsed()) return run_verify(opt);
        if (cmd_sweep->parsed()) return run_sweep(opt, sweep_param, sweep_from, sweep_to, sweep_steps);
        if (cmd_simulate->parsed())
            return run_simulate(opt, games, seed, type_mode, payment_mode);
    } catch (const peerpred::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const peerpred::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const peerpred::InfeasibleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        std::cout << peerpred::to_json(e.report()).dump() << '\n';
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const peerpred::DegenerateBelief& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
