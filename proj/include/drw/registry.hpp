#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "drw/geom_graph.hpp"

namespace drw {

using WalkId = std::uint32_t;

/// Global node -> walk membership map and the broker set derived from it.
///
/// A node is a broker iff at least two walks have registered it. Membership
/// only grows. All updates are serialized through this object; the reference
/// build is single-threaded.
class OverlayRegistry {
public:
    explicit OverlayRegistry(std::size_t node_count) : membership_(node_count) {}

    /// Adds `walk` to the membership of `node`. Returns true iff the walk was
    /// newly added and the node now has two or more walks (it is a broker).
    /// Re-registering a walk is a no-op returning false.
    bool register_member(NodeId node, WalkId walk);

    std::span<const WalkId> walks_at(NodeId node) const;

    /// Smallest walk id other than `self` registered at `node`, if any.
    std::optional<WalkId> other_walk(NodeId node, WalkId self) const;

    bool belongs_to_other(NodeId node, WalkId self) const { return other_walk(node, self).has_value(); }
    bool is_broker(NodeId node) const { return walks_at(node).size() >= 2; }
    bool is_registered(NodeId node) const { return !walks_at(node).empty(); }

    const std::set<NodeId>& brokers() const noexcept { return brokers_; }
    std::size_t node_count() const noexcept { return membership_.size(); }

private:
    std::vector<std::vector<WalkId>> membership_;
    std::set<NodeId> brokers_;
};

bool register_member(OverlayRegistry& registry, NodeId node, WalkId walk);

}  // namespace drw
