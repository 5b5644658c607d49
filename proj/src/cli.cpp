#include "drw/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "drw/errors.hpp"
#include "drw/experiments.hpp"
#include "drw/geom_graph.hpp"
#include "drw/metrics.hpp"
#include "drw/overlay.hpp"

namespace drw {

namespace {

struct GenOptions {
    std::size_t n = 1000;
    double r = 0.05;
    std::uint64_t seed = 0;
    std::size_t max_attempts = 1000;
    std::string out;
};

struct BuildOptions {
    std::string net;
    std::size_t n = 1000;
    double r = 0.05;
    std::size_t initiators = 2;
    std::string strategy = "drw";
    double alpha = 1.0;
    double beta = 1.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string trace;
    std::string marking = "lagged";
    std::string pair_mode = "halt";
    bool free_roam = false;
    std::optional<std::size_t> step_budget;
};

struct ExperimentOptions {
    double scale = 0.1;
    std::vector<std::string> strategies{"drw", "prw"};
    std::string out_dir = ".";
    std::size_t jobs = 1;
    std::uint64_t seed = 0;
    std::vector<std::size_t> nodes;
    double alpha = 1.0;
    double beta = 1.0;
    bool record_time = false;
    std::optional<std::size_t> step_budget;
};

struct StatsOptions {
    std::string in;
    std::vector<std::string> group{"n", "strategy", "initiators"};
};

const std::vector<std::string> kStrategyTokens{"drw", "prw", "twohop", "weighted"};

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::MalformedInput, fmt::format("cannot write {}", path));
    }
    return out;
}

std::vector<GroupKey> to_group_keys(const std::vector<std::string>& tokens)
{
    std::vector<GroupKey> keys;
    for (const auto& t : tokens) {
        keys.push_back(*parse_group_key(t));
    }
    return keys;
}

int cmd_gen(const GenOptions& o, std::ostream& out)
{
    const Network net = generate_network({o.n, o.r, o.seed, o.max_attempts});
    auto file = open_output(o.out);
    file << to_json(net).dump() << '\n';
    out << fmt::format("n: {}\nm: {}\nattempts: {}\n", net.size(), net.edge_count(), net.attempts());
    return kExitOk;
}

int cmd_build(const BuildOptions& o, std::ostream& out)
{
    const Network net = o.net.empty() ? generate_network({o.n, o.r, o.seed}) : load_network(o.net);

    OverlayBuildConfig cfg;
    cfg.initiator_count = o.initiators;
    cfg.strategy = *parse_strategy(o.strategy, o.alpha, o.beta);
    cfg.seed = o.seed;
    cfg.step_budget = o.step_budget;
    cfg.marking = o.marking == "eager" ? MarkingDiscipline::Eager : MarkingDiscipline::Lagged;
    cfg.pair_phase_mode = o.pair_mode == "finish" ? PairPhaseMode::LockStepFinish : PairPhaseMode::LockStep;
    cfg.free_roaming = o.free_roam;

    std::vector<std::string> trace_lines;
    TraceSink sink;
    if (!o.trace.empty()) {
        sink = [&](const TraceRecord& rec) { trace_lines.push_back(to_json(rec).dump()); };
    }
    const OverlayResult result = build_overlay(net, cfg, sink);

    if (!o.out.empty()) {
        auto file = open_output(o.out);
        file << to_json(result).dump() << '\n';
    }
    if (!o.trace.empty()) {
        auto file = open_output(o.trace);
        for (const auto& line : trace_lines) {
            file << line << '\n';
        }
    }
    out << fmt::format("active_path_size: {}\ndepth: {:.6f}\n", active_path_size(result), depth(result, net));
    return kExitOk;
}

int cmd_experiment(const ExperimentOptions& o, std::ostream& out, std::ostream& err)
{
    ScenarioConfig cfg = reference_scenario(o.scale);
    if (!o.nodes.empty()) {
        cfg = with_desk_sizes(std::move(cfg), o.nodes);
    }
    cfg.strategies.clear();
    for (const auto& token : o.strategies) {
        cfg.strategies.push_back(*parse_strategy(token, o.alpha, o.beta));
    }
    cfg.base_seed = o.seed;
    cfg.jobs = o.jobs;
    cfg.record_wall_time = o.record_time;
    cfg.step_budget = o.step_budget;
    cfg.output_path = o.out_dir;

    const auto records = run_scenario(cfg);

    std::filesystem::create_directories(o.out_dir);
    {
        auto file = open_output((std::filesystem::path(o.out_dir) / "records.csv").string());
        write_records_csv(file, cfg, records);
    }
    const std::vector<GroupKey> keys{GroupKey::N, GroupKey::Strategy, GroupKey::Initiators};
    {
        auto file = open_output((std::filesystem::path(o.out_dir) / "summary.csv").string());
        write_summary_csv(file, keys, summarize(records, keys));
    }

    // Records are grouped by cell, replications contiguous.
    std::size_t failures = 0;
    std::size_t dead_cells = 0;
    for (std::size_t first = 0; first < records.size(); first += cfg.replications) {
        std::size_t failed = 0;
        for (std::size_t k = first; k < first + cfg.replications; ++k) {
            failed += records[k].failed ? 1 : 0;
        }
        failures += failed;
        dead_cells += failed == cfg.replications ? 1 : 0;
    }
    out << fmt::format("cells: {}\nrecords: {}\nfailures: {}\n", cfg.cell_count(), records.size(), failures);
    if (dead_cells > 0) {
        err << fmt::format("error: {} cell(s) failed in every replication\n", dead_cells);
        return kExitFailure;
    }
    return kExitOk;
}

int cmd_stats(const StatsOptions& o, std::ostream& out)
{
    std::ifstream in(o.in);
    if (!in) {
        throw Error(ErrorCode::MalformedInput, fmt::format("cannot read {}", o.in));
    }
    const auto records = read_records_csv(in);
    const auto keys = to_group_keys(o.group);
    const auto rows = summarize(records, keys);
    write_summary_csv(out, keys, rows);
    return kExitOk;
}

CLI::Validator positive_scale()
{
    return CLI::Validator(
        [](std::string& value) -> std::string {
            double scale = 0.0;
            if (!CLI::detail::lexical_cast(value, scale) || !(scale > 0.0 && scale <= 1.0)) {
                return "scale must lie in (0, 1]";
            }
            return {};
        },
        "in (0,1]");
}

CLI::Validator group_key_list()
{
    return CLI::Validator(
        [](std::string& value) -> std::string {
            if (!parse_group_key(value)) {
                return fmt::format("unknown group key '{}' (expected n, r, strategy or initiators)", value);
            }
            return {};
        },
        "{n,r,strategy,initiators}");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Directional random walk overlay simulator"};
    app.name("drw");
    app.require_subcommand(1);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a connected unit-disk network and write it as JSON");
    gen_cmd->add_option("--n", gen.n, "Node count")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));
    gen_cmd->add_option("--r", gen.r, "Communication radius (clamped to sqrt(2))")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", gen.seed, "Generation seed");
    gen_cmd->add_option("--max-attempts", gen.max_attempts, "Placements tried before giving up")
        ->check(CLI::PositiveNumber);
    gen_cmd->add_option("--out", gen.out, "Output JSON path")->required();

    BuildOptions build;
    auto* build_cmd = app.add_subcommand("build", "Build one overlay and write the result as JSON");
    auto* net_opt = build_cmd->add_option("--net", build.net, "Network JSON written by `drw gen`");
    build_cmd->add_option("--n", build.n, "Node count when generating")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24))
        ->excludes(net_opt);
    build_cmd->add_option("--r", build.r, "Radius when generating")->check(CLI::PositiveNumber)->excludes(net_opt);
    build_cmd->add_option("--initiators", build.initiators, "Number of initiators (>= 2)")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));
    build_cmd->add_option("--strategy", build.strategy, "Walk strategy")->check(CLI::IsMember(kStrategyTokens));
    build_cmd->add_option("--alpha", build.alpha, "Weight of the first neighborhood (weighted)")
        ->check(CLI::NonNegativeNumber);
    build_cmd->add_option("--beta", build.beta, "Weight of the second neighborhood (weighted)")
        ->check(CLI::NonNegativeNumber);
    build_cmd->add_option("--seed", build.seed, "Seed for generation, initiators and walks");
    build_cmd->add_option("--out", build.out, "Output JSON path for the overlay");
    build_cmd->add_option("--trace", build.trace, "Write a JSON-lines step trace to this path");
    build_cmd->add_option("--marking", build.marking, "Neighborhood marking: lagged or eager")
        ->check(CLI::IsMember({"lagged", "eager"}));
    build_cmd->add_option("--pair-mode", build.pair_mode,
                          "First pair: halt both walks at the first intersection, or let the partner finish")
        ->check(CLI::IsMember({"halt", "finish"}));
    build_cmd->add_flag("--free-roam", build.free_roam, "Pure walks may revisit nodes (prw only)");
    build_cmd->add_option("--step-budget", build.step_budget, "Per-walk step budget (default 50 n)");

    ExperimentOptions exp;
    auto* exp_cmd = app.add_subcommand("experiment", "Run the replicated sweep and write records and summary CSVs");
    exp_cmd->add_option("--scale", exp.scale, "Protocol scale factor")->check(positive_scale());
    exp_cmd->add_option("--strategies", exp.strategies, "Comma-separated strategies")
        ->delimiter(',')
        ->check(CLI::IsMember(kStrategyTokens));
    exp_cmd->add_option("--out-dir", exp.out_dir, "Directory for records.csv and summary.csv");
    exp_cmd->add_option("--jobs", exp.jobs, "Worker threads")->check(CLI::PositiveNumber);
    exp_cmd->add_option("--seed", exp.seed, "Base seed");
    exp_cmd->add_option("--nodes", exp.nodes,
                        "Comma-separated network sizes replacing 1000,2000,3000 (radius rescaled to keep the "
                        "1000-node mean degree)")
        ->delimiter(',')
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));
    exp_cmd->add_option("--alpha", exp.alpha, "Weighted strategy alpha")->check(CLI::NonNegativeNumber);
    exp_cmd->add_option("--beta", exp.beta, "Weighted strategy beta")->check(CLI::NonNegativeNumber);
    exp_cmd->add_flag("--record-time", exp.record_time, "Fill wall_time_ms (otherwise 0, keeping output reproducible)");
    exp_cmd->add_option("--step-budget", exp.step_budget, "Per-walk step budget (default 50 n)");

    StatsOptions stats;
    auto* stats_cmd = app.add_subcommand("stats", "Summarize a records CSV as box-plot statistics");
    stats_cmd->add_option("--in", stats.in, "records.csv from `drw experiment`")->required();
    stats_cmd->add_option("--group", stats.group, "Comma-separated group keys")
        ->delimiter(',')
        ->check(group_key_list());

    std::vector<std::string> argv_storage{"drw"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) {
        argv.push_back(a.data());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*gen_cmd) {
            return cmd_gen(gen, out);
        }
        if (*build_cmd) {
            return cmd_build(build, out);
        }
        if (*exp_cmd) {
            return cmd_experiment(exp, out, err);
        }
        return cmd_stats(stats, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace drw
