#include "drw/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "drw/errors.hpp"
#include "drw/overlay.hpp"

namespace drw {

namespace {

constexpr std::string_view kRecordHeader =
    "n,r,strategy,initiators,rep,seed,active_path_size,depth,total_steps,total_backtracks,failed,wall_time_ms";

double round6(double x)
{
    return std::round(x * 1e6) / 1e6;
}

struct UnitResult {
    // Indexed [strategy][initiator count]
    std::vector<std::vector<ExperimentRecord>> rows;
};

UnitResult run_unit(const ScenarioConfig& cfg, const SizeSweep& sweep, std::size_t rep)
{
    const double r = cfg.radius_for(sweep.n);
    const std::uint64_t seed = network_seed(cfg.base_seed, sweep.n, r, rep);

    UnitResult unit;
    unit.rows.resize(cfg.strategies.size());
    for (std::size_t s = 0; s < cfg.strategies.size(); ++s) {
        for (std::size_t initiators : sweep.initiator_counts) {
            ExperimentRecord rec;
            rec.n = sweep.n;
            rec.r = r;
            rec.strategy = cfg.strategies[s].label();
            rec.initiators = initiators;
            rec.rep = rep;
            rec.seed = seed;
            unit.rows[s].push_back(std::move(rec));
        }
    }

    std::optional<Network> net;
    try {
        net = generate_network({sweep.n, r, seed, cfg.max_attempts});
    } catch (const Error&) {
        for (auto& row : unit.rows) {
            for (auto& rec : row) {
                rec.failed = true;
            }
        }
        return unit;
    }

    for (std::size_t s = 0; s < cfg.strategies.size(); ++s) {
        for (std::size_t i = 0; i < sweep.initiator_counts.size(); ++i) {
            ExperimentRecord& rec = unit.rows[s][i];
            OverlayBuildConfig build;
            build.initiator_count = rec.initiators;
            build.strategy = cfg.strategies[s];
            build.seed = build_seed(seed, rec.initiators);
            build.step_budget = cfg.step_budget;
            const auto started = std::chrono::steady_clock::now();
            try {
                const OverlayResult result = build_overlay(*net, build);
                rec.active_path_size = active_path_size(result);
                rec.depth = round6(depth(result, *net));
                rec.total_steps = result.total_steps();
                rec.total_backtracks = result.total_backtracks();
            } catch (const Error&) {
                rec.failed = true;
            }
            if (cfg.record_wall_time) {
                const std::chrono::duration<double, std::milli> spent = std::chrono::steady_clock::now() - started;
                rec.wall_time_ms = std::round(spent.count() * 1e3) / 1e3;
            }
        }
    }
    return unit;
}

std::vector<std::string> split(std::string_view line, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

template <typename T>
T parse_number(const std::string& field, std::size_t line_no)
{
    std::istringstream in(field);
    in.imbue(std::locale::classic());
    T value{};
    in >> value;
    if (in.fail() || !in.eof()) {
        throw Error(ErrorCode::MalformedInput, fmt::format("line {}: bad value '{}'", line_no, field));
    }
    return value;
}

std::string key_value(const ExperimentRecord& rec, GroupKey key)
{
    switch (key) {
    case GroupKey::N: return fmt::format("{}", rec.n);
    case GroupKey::R: return fmt::format("{}", rec.r);
    case GroupKey::Strategy: return rec.strategy;
    case GroupKey::Initiators: return fmt::format("{}", rec.initiators);
    }
    return {};
}

double metric_value(const ExperimentRecord& rec, std::string_view metric)
{
    if (metric == "active_path_size") {
        return static_cast<double>(rec.active_path_size);
    }
    if (metric == "depth") {
        return rec.depth;
    }
    if (metric == "total_steps") {
        return static_cast<double>(rec.total_steps);
    }
    return static_cast<double>(rec.total_backtracks);
}

}  // namespace

double ScenarioConfig::radius_for(std::size_t n) const
{
    if (!radius_reference_n) {
        return r;
    }
    return r * std::sqrt(static_cast<double>(*radius_reference_n) / static_cast<double>(n));
}

std::size_t ScenarioConfig::grid_points() const
{
    std::size_t total = 0;
    for (const auto& sweep : sweeps) {
        total += sweep.initiator_counts.size();
    }
    return total;
}

std::size_t ScenarioConfig::cell_count() const
{
    return grid_points() * strategies.size();
}

std::vector<SizeSweep> reference_sweeps()
{
    const std::vector<std::size_t> common{2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 30, 40, 50, 75, 100, 250, 500};
    auto with = [&](std::initializer_list<std::size_t> tail) {
        auto counts = common;
        counts.insert(counts.end(), tail);
        return counts;
    };
    return {
        {1000, with({625, 750, 875})},
        {2000, with({1000, 1250, 1500, 1750})},
        {3000, with({1000, 1500, 1875, 2250, 2625})},
    };
}

ScenarioConfig reference_scenario(double scale)
{
    if (!(scale > 0.0 && scale <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, fmt::format("scale {} outside (0, 1]", scale));
    }
    ScenarioConfig cfg;
    cfg.scale = scale;
    cfg.r = 0.05;
    cfg.replications = scale == 1.0 ? 100 : std::max<std::size_t>(10, static_cast<std::size_t>(std::lround(100.0 * scale)));
    for (auto sweep : reference_sweeps()) {
        const double cap = scale * static_cast<double>(sweep.n);
        std::erase_if(sweep.initiator_counts, [&](std::size_t i) { return static_cast<double>(i) > cap; });
        cfg.sweeps.push_back(std::move(sweep));
    }
    return cfg;
}

ScenarioConfig with_desk_sizes(ScenarioConfig cfg, std::span<const std::size_t> sizes)
{
    const auto base = reference_sweeps().front();
    cfg.sweeps.clear();
    for (std::size_t n : sizes) {
        SizeSweep sweep{n, base.initiator_counts};
        const double cap = cfg.scale * static_cast<double>(n);
        std::erase_if(sweep.initiator_counts,
                      [&](std::size_t i) { return static_cast<double>(i) > cap || i > n; });
        cfg.sweeps.push_back(std::move(sweep));
    }
    cfg.radius_reference_n = base.n;
    return cfg;
}

void validate(const ScenarioConfig& cfg)
{
    if (cfg.replications < 1) {
        throw Error(ErrorCode::InvalidConfig, "at least one replication is required");
    }
    if (cfg.strategies.empty()) {
        throw Error(ErrorCode::InvalidConfig, "no strategies selected");
    }
    if (!(cfg.r > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "radius must be positive");
    }
    for (const auto& sweep : cfg.sweeps) {
        if (sweep.n < 2) {
            throw Error(ErrorCode::InvalidConfig, "networks need at least two nodes");
        }
        for (std::size_t i : sweep.initiator_counts) {
            if (i < 2 || i > sweep.n) {
                throw Error(ErrorCode::InvalidConfig, fmt::format("{} initiators on {} nodes", i, sweep.n));
            }
        }
    }
}

std::uint64_t network_seed(std::uint64_t base_seed, std::size_t n, double r, std::size_t rep)
{
    const std::uint64_t cell = derive_seed(base_seed, "network", n) ^ mix64(std::bit_cast<std::uint64_t>(r));
    return derive_seed(cell, "replication", rep);
}

std::uint64_t build_seed(std::uint64_t network_seed, std::size_t initiators)
{
    return derive_seed(network_seed, "build", initiators);
}

std::vector<ExperimentRecord> run_scenario(const ScenarioConfig& cfg)
{
    validate(cfg);
    struct Unit {
        std::size_t sweep;
        std::size_t rep;
    };
    std::vector<Unit> units;
    for (std::size_t s = 0; s < cfg.sweeps.size(); ++s) {
        for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
            units.push_back({s, rep});
        }
    }

    std::vector<UnitResult> done(units.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < units.size(); k = next++) {
            done[k] = run_unit(cfg, cfg.sweeps[units[k].sweep], units[k].rep);
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(cfg.jobs, 1, std::max<std::size_t>(1, units.size()));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }

    std::vector<ExperimentRecord> records;
    records.reserve(cfg.cell_count() * cfg.replications);
    for (std::size_t s = 0; s < cfg.sweeps.size(); ++s) {
        const std::size_t first = s * cfg.replications;
        for (std::size_t strat = 0; strat < cfg.strategies.size(); ++strat) {
            for (std::size_t i = 0; i < cfg.sweeps[s].initiator_counts.size(); ++i) {
                for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
                    records.push_back(std::move(done[first + rep].rows[strat][i]));
                }
            }
        }
    }
    return records;
}

void write_records_csv(std::ostream& out, const ScenarioConfig& cfg, std::span<const ExperimentRecord> records)
{
    std::vector<std::string> labels;
    for (const auto& s : cfg.strategies) {
        labels.push_back(s.kind == CostStrategy::Kind::WeightedTwoNeighborhood
                             ? fmt::format("weighted(alpha={},beta={})", s.alpha, s.beta)
                             : s.label());
    }
    std::vector<std::string> sizes;
    for (const auto& sweep : cfg.sweeps) {
        sizes.push_back(fmt::format("{}:[{}]", sweep.n, fmt::join(sweep.initiator_counts, " ")));
    }
    out << "# drw-overlay experiment records\n";
    out << fmt::format("# version: {}\n", kArtifactVersion);
    out << fmt::format("# scale: {}\n", cfg.scale);
    out << fmt::format("# base_seed: {}\n", cfg.base_seed);
    out << fmt::format("# sweeps: {}\n", fmt::join(sizes, " "));
    if (cfg.radius_reference_n) {
        out << fmt::format("# radius: {} * sqrt({} / n) (desk-scale substitution; the original setup uses r = 0.05 "
                           "with n in 1000,2000,3000)\n",
                           cfg.r, *cfg.radius_reference_n);
    } else {
        out << fmt::format("# radius: {}\n", cfg.r);
    }
    out << fmt::format("# strategies: {}\n", fmt::join(labels, ","));
    out << fmt::format("# replications: {}\n", cfg.replications);
    out << fmt::format("# step_budget: {}\n",
                       cfg.step_budget ? fmt::format("{}", *cfg.step_budget) : std::string("50 n"));
    out << "# pairing: replication k uses one network per size, shared by every strategy and initiator count; "
           "initiators depend on (network, count) only\n";
    out << kRecordHeader << '\n';
    for (const auto& rec : records) {
        out << fmt::format("{},{},{},{},{},{},{},{:.6f},{},{},{},{:.3f}\n", rec.n, rec.r, rec.strategy,
                           rec.initiators, rec.rep, rec.seed, rec.active_path_size, rec.depth, rec.total_steps,
                           rec.total_backtracks, rec.failed ? 1 : 0, rec.wall_time_ms);
    }
}

std::vector<ExperimentRecord> read_records_csv(std::istream& in)
{
    std::vector<ExperimentRecord> records;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (!header_seen) {
            if (line != kRecordHeader) {
                throw Error(ErrorCode::MalformedInput, fmt::format("line {}: unexpected header", line_no));
            }
            header_seen = true;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 12) {
            throw Error(ErrorCode::MalformedInput,
                        fmt::format("line {}: expected 12 fields, found {}", line_no, f.size()));
        }
        ExperimentRecord rec;
        rec.n = parse_number<std::size_t>(f[0], line_no);
        rec.r = parse_number<double>(f[1], line_no);
        rec.strategy = f[2];
        rec.initiators = parse_number<std::size_t>(f[3], line_no);
        rec.rep = parse_number<std::size_t>(f[4], line_no);
        rec.seed = parse_number<std::uint64_t>(f[5], line_no);
        rec.active_path_size = parse_number<std::size_t>(f[6], line_no);
        rec.depth = parse_number<double>(f[7], line_no);
        rec.total_steps = parse_number<std::size_t>(f[8], line_no);
        rec.total_backtracks = parse_number<std::size_t>(f[9], line_no);
        const auto failed = parse_number<int>(f[10], line_no);
        if (failed != 0 && failed != 1) {
            throw Error(ErrorCode::MalformedInput, fmt::format("line {}: failed flag must be 0 or 1", line_no));
        }
        rec.failed = failed == 1;
        rec.wall_time_ms = parse_number<double>(f[11], line_no);
        records.push_back(std::move(rec));
    }
    if (!header_seen) {
        throw Error(ErrorCode::MalformedInput, "missing header row");
    }
    return records;
}

std::optional<GroupKey> parse_group_key(std::string_view token)
{
    if (token == "n") {
        return GroupKey::N;
    }
    if (token == "r") {
        return GroupKey::R;
    }
    if (token == "strategy") {
        return GroupKey::Strategy;
    }
    if (token == "initiators") {
        return GroupKey::Initiators;
    }
    return std::nullopt;
}

std::string_view to_string(GroupKey key)
{
    switch (key) {
    case GroupKey::N: return "n";
    case GroupKey::R: return "r";
    case GroupKey::Strategy: return "strategy";
    case GroupKey::Initiators: return "initiators";
    }
    return "";
}

std::vector<SummaryRow> summarize(std::span<const ExperimentRecord> records, std::span<const GroupKey> keys)
{
    if (records.empty()) {
        throw Error(ErrorCode::EmptyGroup, "no records to summarize");
    }
    std::vector<std::vector<std::string>> order;
    std::map<std::vector<std::string>, std::vector<const ExperimentRecord*>> groups;
    for (const auto& rec : records) {
        std::vector<std::string> key;
        for (GroupKey k : keys) {
            key.push_back(key_value(rec, k));
        }
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) {
            order.push_back(key);
        }
        if (!rec.failed) {
            it->second.push_back(&rec);
        }
    }

    std::vector<SummaryRow> rows;
    for (const auto& key : order) {
        const auto& members = groups.at(key);
        if (members.empty()) {
            continue;
        }
        for (std::string_view metric : kSummaryMetrics) {
            std::vector<double> samples;
            samples.reserve(members.size());
            for (const auto* rec : members) {
                samples.push_back(metric_value(*rec, metric));
            }
            rows.push_back({key, std::string(metric), box_stats(samples)});
        }
    }
    if (rows.empty()) {
        throw Error(ErrorCode::EmptyGroup, "every record failed");
    }
    return rows;
}

void write_summary_csv(std::ostream& out, std::span<const GroupKey> keys, std::span<const SummaryRow> rows)
{
    std::vector<std::string_view> names;
    for (GroupKey k : keys) {
        names.push_back(to_string(k));
    }
    out << fmt::format("{},metric,min,q1,median,q3,max,lo_whisker,hi_whisker,outlier_count,count\n",
                       fmt::join(names, ","));
    for (const auto& row : rows) {
        const auto& s = row.stats;
        out << fmt::format("{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{},{}\n", fmt::join(row.keys, ","),
                           row.metric, s.min, s.q1, s.median, s.q3, s.max, s.lower_whisker, s.upper_whisker,
                           s.outliers.size(), s.count);
    }
}

}  // namespace drw
