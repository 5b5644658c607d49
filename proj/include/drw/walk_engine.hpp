#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drw/geom_graph.hpp"
#include "drw/registry.hpp"
#include "drw/rng.hpp"

namespace drw {

/// How a walk scores the candidate neighbors of its head.
struct CostStrategy {
    enum class Kind {
        FirstNeighborhood,        ///< |N(v) ∩ marked|
        TwoHopWeight,             ///< |N(x) ∩ N(v)|, x = node before the head
        WeightedTwoNeighborhood,  ///< alpha |N(v) ∩ marked| + beta |N(v) ∩ N(marked)|
        Pure,                     ///< no cost; uniform choice among candidates
    };

    Kind kind = Kind::FirstNeighborhood;
    double alpha = 1.0;
    double beta = 1.0;

    static CostStrategy first_neighborhood() { return {Kind::FirstNeighborhood}; }
    static CostStrategy two_hop() { return {Kind::TwoHopWeight}; }
    static CostStrategy weighted(double alpha, double beta);
    static CostStrategy pure() { return {Kind::Pure}; }

    /// CLI token: drw, twohop, weighted or prw.
    std::string label() const;

    friend bool operator==(const CostStrategy&, const CostStrategy&) = default;
};

/// Parses drw | prw | twohop | weighted. Weighted uses the given alpha/beta.
std::optional<CostStrategy> parse_strategy(std::string_view token, double alpha = 1.0, double beta = 1.0);

/// Which neighborhoods have been marked when a step scores candidates.
///  - Lagged: neighbors of every route node except the head (the operational
///    pseudocode marks N of the penultimate node each iteration).
///  - Eager: the head's neighborhood is marked as well (closed-form union).
enum class MarkingDiscipline { Lagged, Eager };

enum class WalkStatus { Active, Intersected, Exhausted };

std::string_view to_string(WalkStatus status);

struct StepOutcome {
    enum class Kind { Extended, Intersected, Backtracked, Exhausted };

    Kind kind = Kind::Extended;
    /// Extended: appended node. Intersected: the broker. Otherwise the head.
    NodeId node = 0;
    /// Intersected only: the earliest other walk registered at the broker.
    WalkId other_walk = 0;
    /// Route length (1-based index of the head) after the step.
    std::size_t cursor = 0;
    /// Cost of the chosen candidate for cost-driven extensions.
    std::optional<double> cost;
};

std::string_view to_string(StepOutcome::Kind kind);

/// One walker.
///
/// `path` lists every recruited node in recruitment order (the member set in
/// order). `route` is the live stack from the initiator to the head: it is
/// popped when the walk backtracks and always consists of adjacent nodes.
/// Backtracked nodes leave the route but stay in `path` and keep blocking
/// revisits. `links` holds one (predecessor, node) pair per recruited node
/// after the first.
struct WalkState {
    WalkId id = 0;
    std::vector<NodeId> path;
    std::vector<NodeId> route;
    std::vector<Edge> links;
    std::vector<std::uint8_t> member;
    std::vector<std::uint8_t> marked;
    /// Nodes adjacent to some marked node (the second neighborhood).
    std::vector<std::uint8_t> second_marked;
    MarkingDiscipline marking = MarkingDiscipline::Lagged;
    bool free_roaming = false;
    Rng rng;
    WalkStatus status = WalkStatus::Active;
    std::optional<NodeId> broker;
    std::size_t steps = 0;
    std::size_t backtracks = 0;
    /// Set after a Backtracked outcome: the next step re-examines the new
    /// head without marking or advancing first.
    bool resume_backtrack = false;

    NodeId initiator() const { return path.front(); }
    NodeId head() const { return route.back(); }
    std::size_t cursor() const { return route.size(); }
    bool is_member(NodeId v) const { return member[v] != 0; }
    bool is_marked(NodeId v) const { return marked[v] != 0; }

    std::vector<NodeId> marked_nodes() const;
};

struct WalkOptions {
    MarkingDiscipline marking = MarkingDiscipline::Lagged;
    /// Pure strategy only: revisits allowed, no tabu list or backtracking.
    bool free_roaming = false;
};

struct InitResult {
    WalkState walk;
    std::optional<StepOutcome> outcome;
};

/// Starts walk `id` at `initiator` and registers its first members.
///
/// If the initiator is already part of another walk it becomes a broker at
/// once. Otherwise, if a neighbor of the initiator belongs to another walk,
/// that neighbor is appended and the walk is Intersected. Failing both, a
/// uniformly random neighbor becomes the second node.
InitResult init_walk(const Network& net, NodeId initiator, WalkId id, OverlayRegistry& registry,
                     std::uint64_t rng_seed, const WalkOptions& options = {});

/// |N(v) ∩ marked| for the walk's current marking.
std::size_t cost_first_neighborhood(NodeId v, const WalkState& walk, const Network& net);

/// Number of common neighbors of x and z.
std::size_t cost_two_hop(NodeId x, NodeId z, const Network& net);

double cost_weighted(NodeId v, const WalkState& walk, const Network& net, double alpha, double beta);

/// Cost of candidate `v` under `strategy` for the walk's current state.
double candidate_cost(NodeId v, const WalkState& walk, const Network& net, const CostStrategy& strategy);

/// Non-member neighbors of the head, ascending.
std::vector<NodeId> candidates(const WalkState& walk, const Network& net);

/// One loop iteration of the walker: mark, look for candidates (backtracking
/// one node per call when there are none), stop on a node of another walk,
/// otherwise append a minimum-cost candidate (uniform tie-break).
StepOutcome step(WalkState& walk, const Network& net, OverlayRegistry& registry, const CostStrategy& strategy);

using StepObserver = std::function<void(const WalkState&, const StepOutcome&)>;

/// Steps until the walk is Intersected or Exhausted. Throws
/// StepBudgetExceeded if it is still Active after `step_budget` steps.
void run_walk_until_stop(WalkState& walk, const Network& net, OverlayRegistry& registry,
                         const CostStrategy& strategy, std::size_t step_budget,
                         const StepObserver& observer = {});

inline std::size_t default_step_budget(std::size_t n) { return 50 * n; }

}  // namespace drw
