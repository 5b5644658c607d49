#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <json.hpp>

#include "drw/geom_graph.hpp"
#include "drw/registry.hpp"
#include "drw/rng.hpp"
#include "drw/walk_engine.hpp"

namespace drw {

/// What happens to the partner walk once one walk of the first pair intersects.
enum class PairPhaseMode {
    LockStep,       ///< both walks stop; the partner is finalized at the shared broker
    LockStepFinish, ///< the partner keeps stepping until it meets a foreign node itself
};

struct OverlayBuildConfig {
    std::size_t initiator_count = 2;
    CostStrategy strategy = CostStrategy::first_neighborhood();
    std::uint64_t seed = 0;
    /// Per-walk step budget; defaults to 50 n.
    std::optional<std::size_t> step_budget;
    PairPhaseMode pair_phase_mode = PairPhaseMode::LockStep;
    MarkingDiscipline marking = MarkingDiscipline::Lagged;
    /// Pure strategy only.
    bool free_roaming = false;
    /// Explicit initiators in walk order; when empty they are sampled.
    std::vector<NodeId> initiators;
};

struct OverlayResult {
    std::vector<WalkState> walks;
    std::vector<NodeId> initiators;
    /// Union of all walk members, ascending.
    std::vector<NodeId> active_path;
    /// Edges traced by the walks, (u, v) with u < v, ascending.
    std::vector<Edge> active_path_edges;
    std::vector<NodeId> brokers;
    std::vector<std::size_t> per_walk_steps;
    std::vector<std::size_t> per_walk_backtracks;

    std::size_t total_steps() const;
    std::size_t total_backtracks() const;
};

/// One line of the optional per-step walk trace.
struct TraceRecord {
    WalkId walk = 0;
    /// Step index within the walk; 0 is the initialization.
    std::size_t iter = 0;
    std::string_view outcome;
    NodeId node = 0;
    std::size_t cursor = 0;
    std::optional<double> cost;
};

using TraceSink = std::function<void(const TraceRecord&)>;

nlohmann::json to_json(const TraceRecord& record);

/// Samples `count` distinct nodes uniformly without replacement.
std::vector<NodeId> select_initiators(const Network& net, std::size_t count, Rng& rng);

std::uint64_t walk_seed(std::uint64_t build_seed, WalkId walk);
std::uint64_t initiator_seed(std::uint64_t build_seed);

/// Builds the overlay: walks 0 and 1 advance in strict alternation until one
/// of them intersects the other, then each further initiator's walk runs to
/// intersection against everything registered so far.
///
/// Throws BuildFailedError when a walk is Exhausted or exceeds its budget.
OverlayResult build_overlay(const Network& net, const OverlayBuildConfig& cfg, const TraceSink& trace = {});

nlohmann::json to_json(const OverlayResult& result);

}  // namespace drw
