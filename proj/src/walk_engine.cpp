#include "drw/walk_engine.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "drw/errors.hpp"

namespace drw {

namespace {

void append_member(WalkState& walk, OverlayRegistry& registry, NodeId v)
{
    if (!walk.route.empty()) {
        walk.links.emplace_back(walk.head(), v);
    }
    walk.path.push_back(v);
    walk.route.push_back(v);
    walk.member[v] = 1;
    registry.register_member(v, walk.id);
}

void mark_neighborhood(WalkState& walk, const Network& net, NodeId v)
{
    for (NodeId u : net.neighbors(v)) {
        if (walk.marked[u]) {
            continue;
        }
        walk.marked[u] = 1;
        for (NodeId t : net.neighbors(u)) {
            walk.second_marked[t] = 1;
        }
    }
}

std::size_t count_flagged(std::span<const NodeId> nodes, const std::vector<std::uint8_t>& flags)
{
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [&](NodeId u) { return flags[u] != 0; }));
}

StepOutcome intersect_at(WalkState& walk, OverlayRegistry& registry, NodeId broker, WalkId other)
{
    if (!walk.is_member(broker)) {
        append_member(walk, registry, broker);
    } else {
        registry.register_member(broker, walk.id);
    }
    walk.status = WalkStatus::Intersected;
    walk.broker = broker;
    return {StepOutcome::Kind::Intersected, broker, other, walk.cursor(), std::nullopt};
}

StepOutcome free_roaming_step(WalkState& walk, const Network& net, OverlayRegistry& registry)
{
    const auto around = net.neighbors(walk.head());
    for (NodeId v : around) {
        if (auto other = registry.other_walk(v, walk.id)) {
            return intersect_at(walk, registry, v, *other);
        }
    }
    const NodeId next = around[walk.rng.uniform_index(around.size())];
    if (walk.is_member(next)) {
        walk.route.push_back(next);
    } else {
        append_member(walk, registry, next);
    }
    return {StepOutcome::Kind::Extended, next, 0, walk.cursor(), std::nullopt};
}

}  // namespace

CostStrategy CostStrategy::weighted(double alpha, double beta)
{
    if (!(alpha >= 0.0) || !(beta >= 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "alpha and beta must be non-negative");
    }
    return {Kind::WeightedTwoNeighborhood, alpha, beta};
}

std::string CostStrategy::label() const
{
    switch (kind) {
    case Kind::FirstNeighborhood: return "drw";
    case Kind::TwoHopWeight: return "twohop";
    case Kind::WeightedTwoNeighborhood: return "weighted";
    case Kind::Pure: return "prw";
    }
    return "unknown";
}

std::optional<CostStrategy> parse_strategy(std::string_view token, double alpha, double beta)
{
    if (token == "drw") {
        return CostStrategy::first_neighborhood();
    }
    if (token == "prw") {
        return CostStrategy::pure();
    }
    if (token == "twohop") {
        return CostStrategy::two_hop();
    }
    if (token == "weighted") {
        return CostStrategy::weighted(alpha, beta);
    }
    return std::nullopt;
}

std::string_view to_string(WalkStatus status)
{
    switch (status) {
    case WalkStatus::Active: return "active";
    case WalkStatus::Intersected: return "intersected";
    case WalkStatus::Exhausted: return "exhausted";
    }
    return "unknown";
}

std::string_view to_string(StepOutcome::Kind kind)
{
    switch (kind) {
    case StepOutcome::Kind::Extended: return "extended";
    case StepOutcome::Kind::Intersected: return "intersected";
    case StepOutcome::Kind::Backtracked: return "backtracked";
    case StepOutcome::Kind::Exhausted: return "exhausted";
    }
    return "unknown";
}

std::vector<NodeId> WalkState::marked_nodes() const
{
    std::vector<NodeId> out;
    for (NodeId v = 0; v < marked.size(); ++v) {
        if (marked[v]) {
            out.push_back(v);
        }
    }
    return out;
}

InitResult init_walk(const Network& net, NodeId initiator, WalkId id, OverlayRegistry& registry,
                     std::uint64_t rng_seed, const WalkOptions& options)
{
    const auto around = net.neighbors(initiator);
    if (around.empty()) {
        throw Error(ErrorCode::IsolatedInitiator, fmt::format("node {} has no neighbors", initiator));
    }

    InitResult result;
    WalkState& walk = result.walk;
    walk.id = id;
    walk.member.assign(net.size(), 0);
    walk.marked.assign(net.size(), 0);
    walk.second_marked.assign(net.size(), 0);
    walk.marking = options.marking;
    walk.free_roaming = options.free_roaming;
    walk.rng = Rng(rng_seed);

    if (auto other = registry.other_walk(initiator, id)) {
        result.outcome = intersect_at(walk, registry, initiator, *other);
        return result;
    }
    append_member(walk, registry, initiator);

    for (NodeId v : around) {
        if (auto other = registry.other_walk(v, id)) {
            result.outcome = intersect_at(walk, registry, v, *other);
            return result;
        }
    }
    append_member(walk, registry, around[walk.rng.uniform_index(around.size())]);
    return result;
}

std::size_t cost_first_neighborhood(NodeId v, const WalkState& walk, const Network& net)
{
    return count_flagged(net.neighbors(v), walk.marked);
}

std::size_t cost_two_hop(NodeId x, NodeId z, const Network& net)
{
    const auto a = net.neighbors(x);
    const auto b = net.neighbors(z);
    std::size_t common = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    return common;
}

double cost_weighted(NodeId v, const WalkState& walk, const Network& net, double alpha, double beta)
{
    const auto around = net.neighbors(v);
    return alpha * static_cast<double>(count_flagged(around, walk.marked)) +
           beta * static_cast<double>(count_flagged(around, walk.second_marked));
}

double candidate_cost(NodeId v, const WalkState& walk, const Network& net, const CostStrategy& strategy)
{
    switch (strategy.kind) {
    case CostStrategy::Kind::FirstNeighborhood:
        return static_cast<double>(cost_first_neighborhood(v, walk, net));
    case CostStrategy::Kind::TwoHopWeight:
        // With the head as the only route node there is no predecessor to compare against.
        if (walk.route.size() < 2) {
            return 0.0;
        }
        return static_cast<double>(cost_two_hop(walk.route[walk.route.size() - 2], v, net));
    case CostStrategy::Kind::WeightedTwoNeighborhood:
        return cost_weighted(v, walk, net, strategy.alpha, strategy.beta);
    case CostStrategy::Kind::Pure:
        return 0.0;
    }
    return 0.0;
}

std::vector<NodeId> candidates(const WalkState& walk, const Network& net)
{
    std::vector<NodeId> out;
    for (NodeId v : net.neighbors(walk.head())) {
        if (!walk.is_member(v)) {
            out.push_back(v);
        }
    }
    return out;
}

StepOutcome step(WalkState& walk, const Network& net, OverlayRegistry& registry, const CostStrategy& strategy)
{
    if (walk.status != WalkStatus::Active) {
        throw Error(ErrorCode::InvalidConfig, fmt::format("walk {} is not active", walk.id));
    }
    ++walk.steps;
    if (walk.free_roaming) {
        return free_roaming_step(walk, net, registry);
    }

    if (!walk.resume_backtrack) {
        if (walk.route.size() >= 2) {
            mark_neighborhood(walk, net, walk.route[walk.route.size() - 2]);
        }
        if (walk.marking == MarkingDiscipline::Eager) {
            mark_neighborhood(walk, net, walk.head());
        }
    }
    walk.resume_backtrack = false;

    const auto options = candidates(walk, net);
    if (options.empty()) {
        if (walk.route.size() == 1) {
            walk.status = WalkStatus::Exhausted;
            return {StepOutcome::Kind::Exhausted, walk.head(), 0, walk.cursor(), std::nullopt};
        }
        walk.route.pop_back();
        ++walk.backtracks;
        walk.resume_backtrack = true;
        return {StepOutcome::Kind::Backtracked, walk.head(), 0, walk.cursor(), std::nullopt};
    }

    for (NodeId v : options) {
        if (auto other = registry.other_walk(v, walk.id)) {
            return intersect_at(walk, registry, v, *other);
        }
    }

    if (strategy.kind == CostStrategy::Kind::Pure) {
        const NodeId next = options[walk.rng.uniform_index(options.size())];
        append_member(walk, registry, next);
        return {StepOutcome::Kind::Extended, next, 0, walk.cursor(), std::nullopt};
    }

    double best = std::numeric_limits<double>::infinity();
    std::vector<NodeId> cheapest;
    for (NodeId v : options) {
        const double c = candidate_cost(v, walk, net, strategy);
        if (c < best) {
            best = c;
            cheapest.assign(1, v);
        } else if (c == best) {
            cheapest.push_back(v);
        }
    }
    const NodeId next = cheapest.size() == 1 ? cheapest.front()
                                             : cheapest[walk.rng.uniform_index(cheapest.size())];
    append_member(walk, registry, next);
    return {StepOutcome::Kind::Extended, next, 0, walk.cursor(), best};
}

void run_walk_until_stop(WalkState& walk, const Network& net, OverlayRegistry& registry,
                         const CostStrategy& strategy, std::size_t step_budget, const StepObserver& observer)
{
    std::size_t taken = 0;
    while (walk.status == WalkStatus::Active) {
        if (taken == step_budget) {
            throw Error(ErrorCode::StepBudgetExceeded,
                        fmt::format("walk {} still active after {} steps", walk.id, step_budget));
        }
        const StepOutcome outcome = step(walk, net, registry, strategy);
        ++taken;
        if (observer) {
            observer(walk, outcome);
        }
    }
}

}  // namespace drw
