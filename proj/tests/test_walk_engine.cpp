#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "drw/errors.hpp"
#include "drw/overlay.hpp"
#include "drw/walk_engine.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace drw {
namespace {

using testing::FanGraph;
using testing::intersection_size;
using testing::neighbor_set;

std::uint64_t seed_with_first_hop(std::size_t degree, std::size_t index)
{
    for (std::uint64_t s = 0;; ++s) {
        Rng probe(s);
        if (probe.uniform_index(degree) == index) {
            return s;
        }
    }
}

// A walk that has taken `steps` steps on its own (no other walk registered).
struct SoloWalk {
    OverlayRegistry registry;
    WalkState walk;
};

SoloWalk solo_walk(const Network& net, NodeId start, std::uint64_t seed, std::size_t steps,
                   const CostStrategy& strategy = CostStrategy::first_neighborhood(),
                   const WalkOptions& options = {})
{
    OverlayRegistry registry(net.size());
    WalkState walk = init_walk(net, start, 0, registry, seed, options).walk;
    SoloWalk s{std::move(registry), std::move(walk)};
    for (std::size_t i = 0; i < steps && s.walk.status == WalkStatus::Active; ++i) {
        step(s.walk, net, s.registry, strategy);
    }
    return s;
}

std::set<NodeId> marked_set(const WalkState& w)
{
    const auto v = w.marked_nodes();
    return {v.begin(), v.end()};
}

TEST(InitWalk, FirstWalkIsActiveWithTwoNodes)
{
    const Network net = generate_network({100, 0.2, 1, 1000});
    OverlayRegistry registry(net.size());
    auto init = init_walk(net, 5, 0, registry, 17);
    EXPECT_FALSE(init.outcome.has_value());
    const WalkState& w = init.walk;
    EXPECT_EQ(w.status, WalkStatus::Active);
    ASSERT_EQ(w.path.size(), 2u);
    EXPECT_EQ(w.cursor(), 2u);
    EXPECT_EQ(w.path[0], 5u);
    EXPECT_TRUE(net.adjacent(5, w.path[1]));
    EXPECT_EQ(registry.walks_at(5).size(), 1u);
    EXPECT_EQ(registry.walks_at(w.path[1]).size(), 1u);
    EXPECT_TRUE(w.marked_nodes().empty());
}

TEST(InitWalk, NeighborOfAnotherWalkIntersectsImmediately)
{
    const Network net = testing::branch_graph();
    OverlayRegistry registry(net.size());
    auto first = init_walk(net, 0, 0, registry, 1);
    ASSERT_EQ(first.walk.path, (std::vector<NodeId>{0, 1}));

    auto second = init_walk(net, 3, 1, registry, 2);
    ASSERT_TRUE(second.outcome.has_value());
    EXPECT_EQ(second.outcome->kind, StepOutcome::Kind::Intersected);
    EXPECT_EQ(second.outcome->node, 1u);
    EXPECT_EQ(second.outcome->other_walk, 0u);
    EXPECT_EQ(second.walk.status, WalkStatus::Intersected);
    EXPECT_EQ(second.walk.broker, NodeId{1});
    EXPECT_EQ(second.walk.path, (std::vector<NodeId>{3, 1}));
    EXPECT_TRUE(registry.is_broker(1));
}

TEST(InitWalk, InitiatorInsideAnotherWalkBecomesBroker)
{
    const Network net = testing::branch_graph();
    OverlayRegistry registry(net.size());
    init_walk(net, 0, 0, registry, 1);
    auto second = init_walk(net, 1, 1, registry, 2);
    ASSERT_TRUE(second.outcome.has_value());
    EXPECT_EQ(second.outcome->node, 1u);
    EXPECT_EQ(second.walk.path, (std::vector<NodeId>{1}));
    EXPECT_TRUE(registry.is_broker(1));
}

TEST(InitWalk, IsolatedInitiatorThrows)
{
    const Network net = Network::unit_disk({{0.0, 0.0}, {1.0, 1.0}}, 0.05);
    OverlayRegistry registry(net.size());
    try {
        init_walk(net, 0, 0, registry, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IsolatedInitiator);
    }
}

TEST(InitWalk, FirstHopIsUniform)
{
    const Network net = generate_network({200, 0.15, 4, 1000});
    NodeId start = 0;
    for (NodeId v = 0; v < net.size(); ++v) {
        if (net.degree(v) >= 5) {
            start = v;
            break;
        }
    }
    const auto around = net.neighbors(start);
    std::map<NodeId, std::size_t> hits;
    constexpr std::size_t kTrials = 10000;
    for (std::size_t t = 0; t < kTrials; ++t) {
        OverlayRegistry registry(net.size());
        ++hits[init_walk(net, start, 0, registry, derive_seed(77, "trial", t)).walk.path[1]];
    }
    ASSERT_EQ(hits.size(), around.size());
    const double p = 1.0 / static_cast<double>(around.size());
    const double sigma = std::sqrt(kTrials * p * (1 - p));
    std::vector<std::size_t> counts;
    for (NodeId v : around) {
        EXPECT_NEAR(static_cast<double>(hits[v]), kTrials * p, 3 * sigma) << "neighbor " << v;
        counts.push_back(hits[v]);
    }
    EXPECT_LT(testing::chi_square_uniform(counts), testing::chi_square_critical_999(counts.size() - 1.0));
}

TEST(CostFirstNeighborhood, ReproducesFanCostPattern)
{
    const FanGraph g;
    OverlayRegistry registry(g.net.size());
    auto walk = init_walk(g.net, g.x, 0, registry, seed_with_first_hop(4, 0)).walk;
    ASSERT_EQ(walk.path, (std::vector<NodeId>{g.x, g.y}));
    EXPECT_EQ(cost_first_neighborhood(g.a, walk, g.net), 0u);

    const StepOutcome out = step(walk, g.net, registry, CostStrategy::first_neighborhood());
    EXPECT_EQ(marked_set(walk), neighbor_set(g.net, g.x));
    EXPECT_EQ(cost_first_neighborhood(g.a, walk, g.net), 3u);
    EXPECT_EQ(cost_first_neighborhood(g.b, walk, g.net), 2u);
    EXPECT_EQ(cost_first_neighborhood(g.c, walk, g.net), 3u);
    EXPECT_EQ(cost_first_neighborhood(g.d, walk, g.net), 2u);
    EXPECT_EQ(cost_first_neighborhood(g.z, walk, g.net), 1u);

    EXPECT_EQ(out.kind, StepOutcome::Kind::Extended);
    EXPECT_EQ(out.node, g.z);
    EXPECT_EQ(out.cost, 1.0);
    EXPECT_EQ(out.cursor, 3u);
}

TEST(CostFirstNeighborhood, MatchesSetOracleOnRandomWalks)
{
    std::size_t queries = 0;
    for (std::uint64_t seed = 0; queries < 1000; ++seed) {
        const Network net = generate_network({100, 0.16, seed, 1000});
        const auto s = solo_walk(net, static_cast<NodeId>(seed % 100), seed, 1 + seed % 15);
        const auto marked = marked_set(s.walk);
        for (NodeId v = 0; v < net.size() && queries < 1000; v += 7, ++queries) {
            EXPECT_EQ(cost_first_neighborhood(v, s.walk, net), intersection_size(neighbor_set(net, v), marked));
        }
    }
}

TEST(CostTwoHop, HandGraphs)
{
    const Network disjoint = testing::explicit_network(4, {{0, 1}, {2, 3}});
    EXPECT_EQ(cost_two_hop(0, 2, disjoint), 0u);
    const Network triangle = testing::explicit_network(3, {{0, 1}, {1, 2}, {0, 2}});
    EXPECT_EQ(cost_two_hop(0, 2, triangle), 1u);
    EXPECT_EQ(cost_two_hop(0, 0, triangle), 2u);
}

TEST(CostTwoHop, MatchesSetOracle)
{
    const Network net = generate_network({100, 0.2, 8, 1000});
    for (NodeId x = 0; x < net.size(); x += 3) {
        for (NodeId z = 0; z < net.size(); z += 5) {
            EXPECT_EQ(cost_two_hop(x, z, net), intersection_size(neighbor_set(net, x), neighbor_set(net, z)));
        }
    }
}

TEST(CostWeighted, ReducesToFirstNeighborhoodWhenBetaIsZero)
{
    const Network net = generate_network({100, 0.16, 2, 1000});
    const auto s = solo_walk(net, 3, 5, 8);
    for (NodeId v = 0; v < net.size(); ++v) {
        EXPECT_EQ(cost_weighted(v, s.walk, net, 1.0, 0.0),
                  static_cast<double>(cost_first_neighborhood(v, s.walk, net)));
        EXPECT_EQ(cost_weighted(v, s.walk, net, 0.0, 0.0), 0.0);
    }
}

TEST(CostWeighted, TenNodeHandGraphMatchesBruteForce)
{
    const Network net = testing::explicit_network(
        10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {1, 5}, {5, 6}, {2, 6}, {6, 7}, {3, 7}, {7, 8}, {4, 8}, {8, 9}, {0, 5}});
    OverlayRegistry registry(net.size());
    auto walk = init_walk(net, 0, 0, registry, 3).walk;
    for (int i = 0; i < 3 && walk.status == WalkStatus::Active; ++i) {
        step(walk, net, registry, CostStrategy::weighted(1.0, 1.0));
    }
    const auto marked = marked_set(walk);
    ASSERT_FALSE(marked.empty());
    const auto second = testing::second_neighborhood(net, marked);
    for (NodeId v = 0; v < net.size(); ++v) {
        const auto nv = neighbor_set(net, v);
        const double expected =
            static_cast<double>(intersection_size(nv, marked)) + static_cast<double>(intersection_size(nv, second));
        EXPECT_EQ(cost_weighted(v, walk, net, 1.0, 1.0), expected) << "node " << v;
    }
}

TEST(Step, IntersectsBeforeEvaluatingCosts)
{
    const Network net = testing::branch_graph();
    OverlayRegistry registry(net.size());
    // Walk 1 owns 3 and 4.
    registry.register_member(3, 1);
    registry.register_member(4, 1);
    auto walk = init_walk(net, 0, 0, registry, 0).walk;
    walk.rng = Rng(seed_with_first_hop(2, 0));  // tie 2 vs 3 would pick 2 if costs were consulted
    const StepOutcome out = step(walk, net, registry, CostStrategy::first_neighborhood());
    EXPECT_EQ(out.kind, StepOutcome::Kind::Intersected);
    EXPECT_EQ(out.node, 3u);
    EXPECT_EQ(out.other_walk, 1u);
    EXPECT_FALSE(out.cost.has_value());
    EXPECT_EQ(walk.status, WalkStatus::Intersected);
    EXPECT_TRUE(registry.is_broker(3));
    EXPECT_THROW(step(walk, net, registry, CostStrategy::first_neighborhood()), Error);
}

TEST(Step, BacktracksOutOfDeadEndThenTakesNearestBranch)
{
    const Network net = testing::dead_end_graph();
    // Find a seed whose tie at node 1 (candidates 2 and 4) goes into the dead end.
    for (std::uint64_t seed = 0;; ++seed) {
        auto s = solo_walk(net, 0, seed, 1);
        if (s.walk.path.back() != 2) {
            continue;
        }
        const auto strategy = CostStrategy::first_neighborhood();
        std::vector<std::pair<StepOutcome::Kind, NodeId>> seen;
        std::vector<std::size_t> cursors;
        for (int i = 0; i < 4; ++i) {
            const auto out = step(s.walk, net, s.registry, strategy);
            seen.emplace_back(out.kind, out.node);
            cursors.push_back(out.cursor);
        }
        using K = StepOutcome::Kind;
        // 2 -> 3, dead end: back to 2, back to 1, then 4.
        const std::vector<std::pair<K, NodeId>> expected{
            {K::Extended, 3}, {K::Backtracked, 2}, {K::Backtracked, 1}, {K::Extended, 4}};
        EXPECT_EQ(seen, expected);
        EXPECT_EQ(cursors, (std::vector<std::size_t>{4, 3, 2, 3}));
        EXPECT_EQ(s.walk.path, (std::vector<NodeId>{0, 1, 2, 3, 4}));
        EXPECT_EQ(s.walk.route, (std::vector<NodeId>{0, 1, 4}));
        EXPECT_EQ(s.walk.backtracks, 2u);
        // Marked: N(0) at step 1, N(1) at step 2, N(2) at step 3; no marking while resuming.
        EXPECT_EQ(marked_set(s.walk), (std::set<NodeId>{0, 1, 2, 3, 4}));
        break;
    }
}

TEST(Step, ExhaustedWhenEveryReachableNodeIsAMember)
{
    const Network net = testing::explicit_network(3, {{0, 1}, {1, 2}});
    auto s = solo_walk(net, 0, 0, 0);
    const auto strategy = CostStrategy::first_neighborhood();
    EXPECT_EQ(step(s.walk, net, s.registry, strategy).kind, StepOutcome::Kind::Extended);
    EXPECT_EQ(step(s.walk, net, s.registry, strategy).kind, StepOutcome::Kind::Backtracked);
    EXPECT_EQ(step(s.walk, net, s.registry, strategy).kind, StepOutcome::Kind::Backtracked);
    const auto last = step(s.walk, net, s.registry, strategy);
    EXPECT_EQ(last.kind, StepOutcome::Kind::Exhausted);
    EXPECT_EQ(last.cursor, 1u);
    EXPECT_EQ(s.walk.status, WalkStatus::Exhausted);
}

TEST(Step, EagerMarkingIncludesTheHead)
{
    const FanGraph g;
    OverlayRegistry registry(g.net.size());
    auto walk = init_walk(g.net, g.x, 0, registry, seed_with_first_hop(4, 0), {MarkingDiscipline::Eager}).walk;
    step(walk, g.net, registry, CostStrategy::first_neighborhood());
    auto expected = neighbor_set(g.net, g.x);
    const auto ny = neighbor_set(g.net, g.y);
    expected.insert(ny.begin(), ny.end());
    EXPECT_EQ(marked_set(walk), expected);
}

TEST(StepProperties, TabuAdjacencyAndLaggedMarking)
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Network net = generate_network({80, 0.18, seed, 1000});
        const CostStrategy strategies[] = {CostStrategy::first_neighborhood(), CostStrategy::two_hop(),
                                           CostStrategy::weighted(1, 1), CostStrategy::pure()};
        const auto& strategy = strategies[seed % 4];
        OverlayRegistry registry(net.size());
        auto walk = init_walk(net, static_cast<NodeId>(seed), 0, registry, seed).walk;
        std::set<NodeId> oracle_marked;
        for (int i = 0; i < 200 && walk.status == WalkStatus::Active; ++i) {
            if (!walk.resume_backtrack && walk.route.size() >= 2) {
                const auto nb = neighbor_set(net, walk.route[walk.route.size() - 2]);
                oracle_marked.insert(nb.begin(), nb.end());
            }
            step(walk, net, registry, strategy);
            ASSERT_EQ(marked_set(walk), oracle_marked);
        }
        const std::set<NodeId> distinct(walk.path.begin(), walk.path.end());
        EXPECT_EQ(distinct.size(), walk.path.size());
        for (NodeId v = 0; v < net.size(); ++v) {
            EXPECT_EQ(walk.is_member(v), distinct.count(v) == 1);
        }
        for (std::size_t i = 1; i < walk.route.size(); ++i) {
            EXPECT_TRUE(net.adjacent(walk.route[i - 1], walk.route[i]));
        }
        ASSERT_EQ(walk.links.size() + 1, walk.path.size());
        for (std::size_t i = 0; i < walk.links.size(); ++i) {
            EXPECT_EQ(walk.links[i].second, walk.path[i + 1]);
            EXPECT_TRUE(net.adjacent(walk.links[i].first, walk.links[i].second));
            EXPECT_TRUE(walk.is_member(walk.links[i].first));
        }
    }
}

TEST(StepProperties, WeightedWithoutBetaPicksSameArgminAsFirstNeighborhood)
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Network net = generate_network({100, 0.16, seed + 100, 1000});
        const auto s = solo_walk(net, 7, seed, 2 + seed % 10);
        if (s.walk.status != WalkStatus::Active) {
            continue;
        }
        const auto options = candidates(s.walk, net);
        auto argmin = [&](const CostStrategy& strategy) {
            double best = 1e300;
            std::set<NodeId> out;
            for (NodeId v : options) {
                const double c = candidate_cost(v, s.walk, net, strategy);
                if (c < best) {
                    best = c;
                    out = {v};
                } else if (c == best) {
                    out.insert(v);
                }
            }
            return out;
        };
        EXPECT_EQ(argmin(CostStrategy::weighted(1.0, 0.0)), argmin(CostStrategy::first_neighborhood()));
    }
}

TEST(StepProperties, IntersectionTakesPrecedenceWheneverAvailable)
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Network net = generate_network({150, 0.13, seed, 1000});
        OverlayRegistry registry(net.size());
        for (NodeId v = 0; v < net.size(); v += 9) {
            registry.register_member(v, 5);
        }
        NodeId start = 1;
        while (registry.is_registered(start) || registry.belongs_to_other(start, 0)) {
            ++start;
        }
        auto init = init_walk(net, start, 0, registry, seed);
        WalkState walk = std::move(init.walk);
        while (walk.status == WalkStatus::Active) {
            const auto options = candidates(walk, net);
            const bool foreign = std::any_of(options.begin(), options.end(),
                                             [&](NodeId v) { return registry.belongs_to_other(v, 0); });
            const auto out = step(walk, net, registry, CostStrategy::first_neighborhood());
            if (foreign) {
                ASSERT_EQ(out.kind, StepOutcome::Kind::Intersected);
            } else {
                ASSERT_NE(out.kind, StepOutcome::Kind::Intersected);
            }
        }
    }
}

TEST(StepProperties, PureSelectionIsUniform)
{
    const Network net = generate_network({200, 0.15, 12, 1000});
    NodeId start = 0;
    OverlayRegistry base(net.size());
    WalkState walk;
    for (std::uint64_t s = 0;; ++s) {
        base = OverlayRegistry(net.size());
        walk = init_walk(net, start, 0, base, s).walk;
        if (candidates(walk, net).size() >= 4) {
            break;
        }
        start = static_cast<NodeId>((start + 1) % net.size());
    }
    const auto options = candidates(walk, net);
    std::map<NodeId, std::size_t> hits;
    constexpr std::size_t kTrials = 10000;
    for (std::size_t t = 0; t < kTrials; ++t) {
        WalkState copy = walk;
        OverlayRegistry registry = base;
        copy.rng = Rng(derive_seed(5, "pure", t));
        ++hits[step(copy, net, registry, CostStrategy::pure()).node];
    }
    std::vector<std::size_t> counts;
    for (NodeId v : options) {
        counts.push_back(hits[v]);
    }
    EXPECT_EQ(hits.size(), options.size());
    EXPECT_LT(testing::chi_square_uniform(counts), testing::chi_square_critical_999(counts.size() - 1.0));
}

TEST(RunWalkUntilStop, StopsImmediatelyWhenAlreadyIntersected)
{
    const Network net = testing::branch_graph();
    OverlayRegistry registry(net.size());
    init_walk(net, 0, 0, registry, 1);
    auto second = init_walk(net, 2, 1, registry, 2).walk;
    ASSERT_EQ(second.status, WalkStatus::Intersected);
    run_walk_until_stop(second, net, registry, CostStrategy::first_neighborhood(), 0);
    EXPECT_EQ(second.steps, 0u);
}

TEST(RunWalkUntilStop, ZeroBudgetOnActiveWalkThrows)
{
    const Network net = testing::branch_graph();
    OverlayRegistry registry(net.size());
    auto walk = init_walk(net, 0, 0, registry, 1).walk;
    try {
        run_walk_until_stop(walk, net, registry, CostStrategy::first_neighborhood(), 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::StepBudgetExceeded);
    }
}

TEST(RunWalkUntilStop, TerminatesAgainstStaticWalkWithinTenN)
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Network net = generate_network({200, 0.12, seed, 1000});
        OverlayRegistry registry(net.size());
        Rng pick(seed);
        const auto starts = select_initiators(net, 2, pick);
        auto w0 = init_walk(net, starts[0], 0, registry, seed).walk;
        for (int i = 0; i < 10 && w0.status == WalkStatus::Active; ++i) {
            step(w0, net, registry, CostStrategy::first_neighborhood());
        }
        auto w1 = init_walk(net, starts[1], 1, registry, seed + 1).walk;
        run_walk_until_stop(w1, net, registry, CostStrategy::first_neighborhood(), 10 * net.size());
        EXPECT_EQ(w1.status, WalkStatus::Intersected) << "seed " << seed;
        ASSERT_TRUE(w1.broker.has_value());
        EXPECT_TRUE(registry.is_broker(*w1.broker));
    }
}

TEST(FreeRoaming, RevisitsAllowedButPathStaysDistinct)
{
    const Network net = generate_network({100, 0.16, 3, 1000});
    auto s = solo_walk(net, 0, 4, 300, CostStrategy::pure(), {MarkingDiscipline::Lagged, true});
    EXPECT_EQ(s.walk.route.size(), 302u);
    const std::set<NodeId> distinct(s.walk.path.begin(), s.walk.path.end());
    EXPECT_EQ(distinct.size(), s.walk.path.size());
    EXPECT_LT(s.walk.path.size(), s.walk.route.size());
    for (std::size_t i = 1; i < s.walk.route.size(); ++i) {
        EXPECT_TRUE(net.adjacent(s.walk.route[i - 1], s.walk.route[i]));
    }
}

TEST(CostStrategy, TokensRoundTrip)
{
    for (const char* token : {"drw", "prw", "twohop", "weighted"}) {
        const auto s = parse_strategy(token, 2.0, 0.5);
        ASSERT_TRUE(s.has_value());
        EXPECT_EQ(s->label(), token);
    }
    EXPECT_FALSE(parse_strategy("greedy").has_value());
    EXPECT_THROW(CostStrategy::weighted(-1.0, 0.0), Error);
}

}  // namespace
}  // namespace drw
