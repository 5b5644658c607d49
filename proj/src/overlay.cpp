#include "drw/overlay.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "drw/errors.hpp"

namespace drw {

namespace {

class Tracer {
public:
    explicit Tracer(const TraceSink& sink) : sink_(sink) {}

    void init(const WalkState& walk, const std::optional<StepOutcome>& outcome) const
    {
        if (!sink_) {
            return;
        }
        if (outcome) {
            sink_({walk.id, 0, to_string(outcome->kind), outcome->node, outcome->cursor, std::nullopt});
        } else {
            sink_({walk.id, 0, "initialized", walk.head(), walk.cursor(), std::nullopt});
        }
    }

    void step(const WalkState& walk, const StepOutcome& outcome) const
    {
        if (sink_) {
            sink_({walk.id, walk.steps, to_string(outcome.kind), outcome.node, outcome.cursor, outcome.cost});
        }
    }

    StepObserver observer() const
    {
        if (!sink_) {
            return {};
        }
        return [this](const WalkState& walk, const StepOutcome& outcome) { step(walk, outcome); };
    }

private:
    const TraceSink& sink_;
};

[[noreturn]] void fail(const WalkState& walk, ErrorCode cause, const std::string& detail)
{
    throw BuildFailedError(walk.id, cause, detail);
}

void check_not_exhausted(const WalkState& walk)
{
    if (walk.status == WalkStatus::Exhausted) {
        fail(walk, ErrorCode::Exhausted, fmt::format("no unvisited node reachable from initiator {}", walk.initiator()));
    }
}

void run_to_stop(WalkState& walk, const Network& net, OverlayRegistry& registry, const CostStrategy& strategy,
                 std::size_t budget, const Tracer& tracer)
{
    try {
        run_walk_until_stop(walk, net, registry, strategy, budget, tracer.observer());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::StepBudgetExceeded) {
            fail(walk, e.code(), e.what());
        }
        throw;
    }
    check_not_exhausted(walk);
}

void validate(const Network& net, const OverlayBuildConfig& cfg)
{
    if (cfg.initiator_count < 2) {
        throw Error(ErrorCode::InvalidConfig, "at least two initiators are required");
    }
    if (cfg.initiator_count > net.size()) {
        throw Error(ErrorCode::TooManyInitiators,
                    fmt::format("{} initiators on {} nodes", cfg.initiator_count, net.size()));
    }
    if (cfg.free_roaming && cfg.strategy.kind != CostStrategy::Kind::Pure) {
        throw Error(ErrorCode::InvalidConfig, "free roaming is only defined for the pure strategy");
    }
    if (!cfg.initiators.empty()) {
        if (cfg.initiators.size() != cfg.initiator_count) {
            throw Error(ErrorCode::InvalidConfig, "explicit initiator list does not match initiator_count");
        }
        std::set<NodeId> distinct(cfg.initiators.begin(), cfg.initiators.end());
        if (distinct.size() != cfg.initiators.size()) {
            throw Error(ErrorCode::InvalidConfig, "initiators must be distinct");
        }
        if (*distinct.rbegin() >= net.size()) {
            throw Error(ErrorCode::UnknownNode, fmt::format("initiator {}", *distinct.rbegin()));
        }
    }
}

}  // namespace

std::size_t OverlayResult::total_steps() const
{
    return std::accumulate(per_walk_steps.begin(), per_walk_steps.end(), std::size_t{0});
}

std::size_t OverlayResult::total_backtracks() const
{
    return std::accumulate(per_walk_backtracks.begin(), per_walk_backtracks.end(), std::size_t{0});
}

nlohmann::json to_json(const TraceRecord& record)
{
    nlohmann::json line = {{"walk", record.walk},
                           {"iter", record.iter},
                           {"outcome", record.outcome},
                           {"node", record.node},
                           {"cursor", record.cursor}};
    line["cost"] = record.cost ? nlohmann::json(*record.cost) : nlohmann::json(nullptr);
    return line;
}

std::vector<NodeId> select_initiators(const Network& net, std::size_t count, Rng& rng)
{
    if (count < 2) {
        throw Error(ErrorCode::InvalidConfig, "at least two initiators are required");
    }
    if (count > net.size()) {
        throw Error(ErrorCode::TooManyInitiators, fmt::format("{} initiators on {} nodes", count, net.size()));
    }
    std::vector<NodeId> pool(net.size());
    std::iota(pool.begin(), pool.end(), NodeId{0});
    // Partial Fisher-Yates
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + rng.uniform_index(pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

std::uint64_t walk_seed(std::uint64_t build_seed, WalkId walk)
{
    return derive_seed(build_seed, "walk", walk);
}

std::uint64_t initiator_seed(std::uint64_t build_seed)
{
    return derive_seed(build_seed, "initiators");
}

OverlayResult build_overlay(const Network& net, const OverlayBuildConfig& cfg, const TraceSink& trace)
{
    validate(net, cfg);
    const std::size_t budget = cfg.step_budget.value_or(default_step_budget(net.size()));
    const WalkOptions options{cfg.marking, cfg.free_roaming};
    const Tracer tracer(trace);

    OverlayResult result;
    if (cfg.initiators.empty()) {
        Rng rng(initiator_seed(cfg.seed));
        result.initiators = select_initiators(net, cfg.initiator_count, rng);
    } else {
        result.initiators = cfg.initiators;
    }

    OverlayRegistry registry(net.size());
    auto start = [&](WalkId id) {
        auto init = init_walk(net, result.initiators[id], id, registry, walk_seed(cfg.seed, id), options);
        tracer.init(init.walk, init.outcome);
        result.walks.push_back(std::move(init.walk));
    };

    // Pair phase: walk 0 then walk 1 each round until one of them intersects.
    start(0);
    start(1);
    auto active = [](const WalkState& w) { return w.status == WalkStatus::Active; };
    std::size_t rounds = 0;
    while (active(result.walks[0]) && active(result.walks[1])) {
        if (rounds == budget) {
            fail(result.walks[0], ErrorCode::StepBudgetExceeded,
                 fmt::format("pair phase still active after {} rounds", budget));
        }
        ++rounds;
        for (WalkId id : {WalkId{0}, WalkId{1}}) {
            WalkState& walk = result.walks[id];
            tracer.step(walk, step(walk, net, registry, cfg.strategy));
            check_not_exhausted(walk);
            if (!active(walk)) {
                break;
            }
        }
    }
    for (WalkState& partner : result.walks) {
        if (!active(partner)) {
            continue;
        }
        if (cfg.pair_phase_mode == PairPhaseMode::LockStep) {
            const WalkState& first = active(result.walks[0]) ? result.walks[1] : result.walks[0];
            partner.status = WalkStatus::Intersected;
            partner.broker = first.broker;
        } else {
            run_to_stop(partner, net, registry, cfg.strategy, budget, tracer);
        }
    }

    for (WalkId id = 2; id < cfg.initiator_count; ++id) {
        start(id);
        run_to_stop(result.walks.back(), net, registry, cfg.strategy, budget, tracer);
    }

    std::set<NodeId> nodes;
    std::set<Edge> edges;
    for (const WalkState& walk : result.walks) {
        nodes.insert(walk.path.begin(), walk.path.end());
        for (auto [u, v] : walk.links) {
            edges.insert(u < v ? Edge{u, v} : Edge{v, u});
        }
        result.per_walk_steps.push_back(walk.steps);
        result.per_walk_backtracks.push_back(walk.backtracks);
    }
    result.active_path.assign(nodes.begin(), nodes.end());
    result.active_path_edges.assign(edges.begin(), edges.end());
    result.brokers.assign(registry.brokers().begin(), registry.brokers().end());
    return result;
}

nlohmann::json to_json(const OverlayResult& result)
{
    nlohmann::json walks = nlohmann::json::array();
    for (const WalkState& walk : result.walks) {
        nlohmann::json w = {{"id", walk.id},
                            {"initiator", walk.initiator()},
                            {"status", to_string(walk.status)},
                            {"path", walk.path},
                            {"route", walk.route},
                            {"steps", walk.steps},
                            {"backtracks", walk.backtracks}};
        w["broker"] = walk.broker ? nlohmann::json(*walk.broker) : nlohmann::json(nullptr);
        walks.push_back(std::move(w));
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [u, v] : result.active_path_edges) {
        edges.push_back({u, v});
    }
    return {{"initiators", result.initiators},
            {"brokers", result.brokers},
            {"active_path", result.active_path},
            {"active_path_edges", std::move(edges)},
            {"walks", std::move(walks)},
            {"total_steps", result.total_steps()},
            {"total_backtracks", result.total_backtracks()}};
}

}  // namespace drw
