#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "drw/metrics.hpp"
#include "drw/walk_engine.hpp"

namespace drw {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

/// Initiator counts swept on networks of one size.
struct SizeSweep {
    std::size_t n = 0;
    std::vector<std::size_t> initiator_counts;
};

struct ScenarioConfig {
    std::vector<SizeSweep> sweeps;
    double r = 0.05;
    /// When set, networks of n nodes use r * sqrt(reference / n), which keeps
    /// the mean degree of the reference size.
    std::optional<std::size_t> radius_reference_n;
    std::vector<CostStrategy> strategies{CostStrategy::first_neighborhood(), CostStrategy::pure()};
    std::size_t replications = 100;
    std::uint64_t base_seed = 0;
    std::optional<std::size_t> step_budget;
    std::size_t max_attempts = 1000;
    std::string output_path;
    double scale = 1.0;
    std::size_t jobs = 1;
    bool record_wall_time = false;

    double radius_for(std::size_t n) const;
    /// (n, initiator count) pairs.
    std::size_t grid_points() const;
    /// grid_points() times the number of strategies.
    std::size_t cell_count() const;
};

struct ExperimentRecord {
    std::size_t n = 0;
    double r = 0.0;
    std::string strategy;
    std::size_t initiators = 0;
    std::size_t rep = 0;
    std::uint64_t seed = 0;
    std::size_t active_path_size = 0;
    /// Rounded to 6 decimals so that CSV round trips are exact.
    double depth = 0.0;
    std::size_t total_steps = 0;
    std::size_t total_backtracks = 0;
    bool failed = false;
    double wall_time_ms = 0.0;

    friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

/// Network sizes and initiator counts of the original evaluation.
std::vector<SizeSweep> reference_sweeps();

/// Full protocol at scale 1. Below 1, replications shrink to
/// max(10, round(100 scale)) and initiator counts above scale * n are dropped.
ScenarioConfig reference_scenario(double scale);

/// Swaps the network sizes for smaller ones (each using the 1000-node
/// initiator list, filtered by the scale rule) and rescales the radius to
/// keep the 1000-node mean degree.
ScenarioConfig with_desk_sizes(ScenarioConfig cfg, std::span<const std::size_t> sizes);

void validate(const ScenarioConfig& cfg);

/// Seed of the network used by replication `rep` at size n. Shared by every
/// strategy and initiator count, so cells are paired.
std::uint64_t network_seed(std::uint64_t base_seed, std::size_t n, double r, std::size_t rep);
std::uint64_t build_seed(std::uint64_t network_seed, std::size_t initiators);

/// Rows ordered by sweep, strategy, initiator count, replication.
std::vector<ExperimentRecord> run_scenario(const ScenarioConfig& cfg);

void write_records_csv(std::ostream& out, const ScenarioConfig& cfg, std::span<const ExperimentRecord> records);
std::vector<ExperimentRecord> read_records_csv(std::istream& in);

enum class GroupKey { N, R, Strategy, Initiators };

std::optional<GroupKey> parse_group_key(std::string_view token);
std::string_view to_string(GroupKey key);

inline constexpr std::string_view kSummaryMetrics[] = {"active_path_size", "depth", "total_steps",
                                                       "total_backtracks"};

struct SummaryRow {
    std::vector<std::string> keys;
    std::string metric;
    BoxStats stats;
};

/// One BoxStats per group and metric over the non-failed records. Groups
/// appear in order of first occurrence. Groups whose records all failed are
/// omitted; throws EmptyGroup when nothing is left to summarize.
std::vector<SummaryRow> summarize(std::span<const ExperimentRecord> records, std::span<const GroupKey> keys);

void write_summary_csv(std::ostream& out, std::span<const GroupKey> keys, std::span<const SummaryRow> rows);

}  // namespace drw
