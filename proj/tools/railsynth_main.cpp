#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rail/bench.hpp"
#include "rail/dsl.hpp"
#include "rail/oracle.hpp"
#include "rail/pta.hpp"
#include "rail/synth.hpp"

namespace {

int fail(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 1;
}

std::optional<std::string> read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Loads, parses and validates; on any problem prints diagnostics and
// returns nullopt.
std::optional<rail::ConstrainedRailwaySystem> load_system(const std::string& path) {
    auto text = read_input(path);
    if (!text) {
        std::cerr << "error: cannot read " << path << "\n";
        return std::nullopt;
    }
    auto parsed = rail::parse_system(*text);
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors)
            std::cerr << path << ":" << e.span.line << ":" << e.span.column << ": "
                      << rail::parse_code_name(e.code) << ": " << e.message << "\n";
        return std::nullopt;
    }
    auto report = rail::validate_system(parsed.system);
    if (!report.empty()) {
        std::cerr << report.to_string();
        return std::nullopt;
    }
    return parsed.system;
}

bool parse_assignments(const std::string& text, std::map<std::string, rail::Rational>& out) {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) return false;
        auto value = rail::parse_rational(item.substr(eq + 1));
        if (!value) return false;
        out[item.substr(0, eq)] = *value;
    }
    return !out.empty();
}

bool parse_grid_axis(const std::string& text, rail::GridAxis& axis) {
    auto eq = text.find('=');
    if (eq == std::string::npos) return false;
    axis.param = text.substr(0, eq);
    std::string range = text.substr(eq + 1);
    auto c1 = range.find(':');
    if (c1 == std::string::npos) return false;
    auto c2 = range.find(':', c1 + 1);
    try {
        axis.lo = std::stol(range.substr(0, c1));
        if (c2 == std::string::npos) {
            axis.hi = std::stol(range.substr(c1 + 1));
            axis.step = 1;
        } else {
            axis.hi = std::stol(range.substr(c1 + 1, c2 - c1 - 1));
            axis.step = std::stol(range.substr(c2 + 1));
        }
    } catch (const std::exception&) {
        return false;
    }
    return axis.step > 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"railway scheduling with parametric timed automata"};
    app.require_subcommand(1);

    std::string input;
    std::string set_text;
    std::string format = "text";
    std::string order = "bfs";
    unsigned threads = 1;
    bool strict = false;
    rail::ExploreLimits limits;
    std::vector<std::string> grid_args;
    long horizon = -1;

    auto* validate = app.add_subcommand("validate", "parse and validate a model file");
    validate->add_option("input", input, "model file or - for stdin")->required();

    auto* translate = app.add_subcommand("translate", "dump the translated PTA network");
    translate->add_option("input", input, "model file or - for stdin")->required();

    auto* synth = app.add_subcommand("synth", "synthesize the feasible parameter set");
    synth->add_option("input", input, "model file or - for stdin")->required();
    synth->add_flag("--strict", strict, "fail instead of returning a bounded result");
    synth->add_option("--max-states", limits.max_states, "exploration state limit");
    synth->add_option("--max-depth", limits.max_depth, "exploration depth limit");
    synth->add_option("--format", format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    synth->add_option("--order", order, "bfs or dfs")->check(CLI::IsMember({"bfs", "dfs"}));
    synth->add_option("--threads", threads, "worker threads (bfs mode)");

    auto* check = app.add_subcommand("check", "feasibility under a full parameter valuation");
    check->add_option("input", input, "model file or - for stdin")->required();
    check->add_option("--set", set_text, "comma-separated p=value assignments");
    check->add_option("--max-states", limits.max_states, "exploration state limit");
    check->add_option("--max-depth", limits.max_depth, "exploration depth limit");

    rail::ScenarioSpec spec;
    std::string scenario = "nop";
    auto* bench = app.add_subcommand("bench", "generate a serial-parallel scenario");
    bench->add_option("--ns", spec.ns, "number of groups")->required();
    bench->add_option("--np", spec.np, "parallel tracks per group")->required();
    bench->add_option("--nt", spec.nt, "number of trains")->required();
    bench->add_option("--scenario", scenario, "nop or last")
        ->check(CLI::IsMember({"nop", "last"}));
    bench->add_option("--seg-dur", spec.seg_dur, "segment duration profile");
    bench->add_option("--pair-dur", spec.pair_dur, "pair duration profile");

    auto* grid = app.add_subcommand("oracle-grid", "compare synthesis against the integer oracle");
    grid->add_option("input", input, "model file or - for stdin")->required();
    grid->add_option("--grid", grid_args, "axis as p=lo:hi[:step] (repeatable)")->required();
    grid->add_option("--horizon", horizon, "oracle horizon override");
    grid->add_option("--threads", threads, "oracle worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) {
            auto sys = load_system(input);
            if (!sys) return 1;
            std::cout << "ok\n";
            return 0;
        }
        if (*translate) {
            auto sys = load_system(input);
            if (!sys) return 1;
            auto problem = rail::translate_system(*sys);
            std::cout << rail::dump_network(problem.network);
            return 0;
        }
        if (*synth) {
            auto sys = load_system(input);
            if (!sys) return 1;
            auto problem = rail::translate_system(*sys);
            rail::ExploreOptions options;
            options.limits = limits;
            options.limits.strict = strict;
            options.order = order == "dfs" ? rail::SearchOrder::Dfs : rail::SearchOrder::Bfs;
            options.threads = threads;
            auto t0 = std::chrono::steady_clock::now();
            rail::SynthResult result;
            try {
                result = rail::ef_synth(problem, options);
            } catch (const rail::LimitError& e) {
                std::cerr << e.what() << "\n";
                return 2;
            }
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
            std::cout << (format == "json" ? rail::format_result_json(result)
                                           : rail::format_result_text(result));
            std::cerr << "stats: states=" << result.stats.states_explored
                      << " pruned=" << result.stats.states_pruned
                      << " targets=" << result.stats.target_hits << " time_ms=" << ms << "\n";
            return 0;
        }
        if (*check) {
            auto sys = load_system(input);
            if (!sys) return 1;
            std::map<std::string, rail::Rational> v;
            if (!set_text.empty() && !parse_assignments(set_text, v))
                return fail("malformed --set assignments");
            auto problem = rail::translate_system(*sys);
            rail::ExploreOptions options;
            options.limits = limits;
            auto result = rail::check_concrete(problem, v, options);
            if (result.feasible) {
                std::cout << "feasible\n";
                return 0;
            }
            if (result.status == rail::SynthStatus::Bounded) {
                std::cout << "unknown\n";
                std::cerr << "exploration limits reached before a schedule was found\n";
                return 2;
            }
            std::cout << "infeasible\n";
            return 0;
        }
        if (*bench) {
            spec.kind = scenario == "last" ? rail::ScenarioSpec::Kind::Last
                                           : rail::ScenarioSpec::Kind::Nop;
            auto sys = rail::gen_serial_parallel(spec);
            std::cout << rail::render_system(sys);
            return 0;
        }
        if (*grid) {
            auto sys = load_system(input);
            if (!sys) return 1;
            std::vector<rail::GridAxis> axes;
            for (const auto& arg : grid_args) {
                rail::GridAxis axis;
                if (!parse_grid_axis(arg, axis)) return fail("malformed --grid axis: " + arg);
                axes.push_back(axis);
            }
            std::optional<long> h;
            if (horizon >= 0) h = horizon;
            auto report = rail::grid_compare(*sys, axes, {}, h, threads);
            std::cout << "points: " << report.points << "\n";
            std::cout << "status: "
                      << (report.synth_status == rail::SynthStatus::Complete ? "complete"
                                                                             : "bounded")
                      << "\n";
            std::cout << "result: " << report.result_text << "\n";
            std::cout << "disagreements: " << report.disagreements.size() << "\n";
            for (const auto& d : report.disagreements) {
                std::cout << "  at";
                for (const auto& [p, val] : d.valuation) std::cout << " " << p << "=" << val;
                std::cout << " oracle=" << (d.oracle_feasible ? "feasible" : "infeasible")
                          << " synth=" << (d.synth_member ? "member" : "outside") << "\n";
            }
            if (report.horizon_hits > 0)
                std::cerr << "warning: oracle horizon saturated on " << report.horizon_hits
                          << " grid points without success\n";
            return report.disagreements.empty() ? 0 : 1;
        }
    } catch (const rail::TranslateError& e) {
        return fail(e.what());
    } catch (const rail::ModelError& e) {
        return fail(e.what());
    } catch (const rail::PtaError& e) {
        return fail(e.what());
    }
    return 0;
}
