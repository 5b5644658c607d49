#include "drw/registry.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "drw/errors.hpp"

namespace drw {

bool OverlayRegistry::register_member(NodeId node, WalkId walk)
{
    if (node >= membership_.size()) {
        throw Error(ErrorCode::UnknownNode, fmt::format("node {} (n = {})", node, membership_.size()));
    }
    auto& walks = membership_[node];
    const auto it = std::lower_bound(walks.begin(), walks.end(), walk);
    if (it != walks.end() && *it == walk) {
        return false;
    }
    walks.insert(it, walk);
    if (walks.size() < 2) {
        return false;
    }
    brokers_.insert(node);
    return true;
}

std::span<const WalkId> OverlayRegistry::walks_at(NodeId node) const
{
    if (node >= membership_.size()) {
        throw Error(ErrorCode::UnknownNode, fmt::format("node {} (n = {})", node, membership_.size()));
    }
    return membership_[node];
}

std::optional<WalkId> OverlayRegistry::other_walk(NodeId node, WalkId self) const
{
    for (WalkId w : walks_at(node)) {
        if (w != self) {
            return w;
        }
    }
    return std::nullopt;
}

bool register_member(OverlayRegistry& registry, NodeId node, WalkId walk)
{
    return registry.register_member(node, walk);
}

}  // namespace drw
