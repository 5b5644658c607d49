#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace drw {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline double squared_distance(const Point& a, const Point& b)
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

struct GraphGenConfig {
    std::size_t n = 1000;
    double r = 0.05;
    std::uint64_t seed = 0;
    std::size_t max_attempts = 1000;
};

/// Immutable undirected graph over points in the unit square.
///
/// Adjacency is stored in compressed form; every neighbor list is sorted and
/// duplicate-free. Networks produced by generate_network() or
/// Network::unit_disk() follow the unit-disk rule (edge iff d(u,v) <= r).
/// Network::from_edges() accepts an explicit topology and is meant for
/// hand-built fixtures.
class Network {
public:
    Network() = default;

    static Network unit_disk(std::vector<Point> positions, double radius, std::uint64_t seed = 0);
    static Network from_edges(std::vector<Point> positions, double radius, std::span<const Edge> edges,
                              std::uint64_t seed = 0);

    std::size_t size() const noexcept { return positions_.size(); }
    std::size_t edge_count() const noexcept { return targets_.size() / 2; }
    double radius() const noexcept { return radius_; }
    std::uint64_t seed() const noexcept { return seed_; }

    /// Placements drawn before this one was accepted (1 for a first-try success).
    std::size_t attempts() const noexcept { return attempts_; }

    const std::vector<Point>& positions() const noexcept { return positions_; }
    const Point& position(NodeId v) const;

    std::span<const NodeId> neighbors(NodeId v) const;
    std::size_t degree(NodeId v) const { return neighbors(v).size(); }
    bool adjacent(NodeId u, NodeId v) const;

    /// All edges as (u, v) with u < v, in ascending order.
    std::vector<Edge> edges() const;

private:
    friend Network generate_network(const GraphGenConfig& cfg);

    void assign_adjacency(std::vector<std::vector<NodeId>>& lists);

    std::vector<Point> positions_;
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> targets_;
    double radius_ = 0.0;
    std::uint64_t seed_ = 0;
    std::size_t attempts_ = 1;
};

/// Largest admissible radius; any two points of the unit square are within it.
inline constexpr double kMaxRadius = 1.4142135623730951;

Network generate_network(const GraphGenConfig& cfg);

std::span<const NodeId> neighbors(const Network& net, NodeId v);

bool is_connected(const Network& net);

/// Maximum Euclidean distance over all pairs of points (0 for fewer than two).
double max_pairwise_distance(std::span<const Point> points);
double max_pairwise_distance(const Network& net);

/// True iff the stored edges are exactly the pairs within the radius.
bool satisfies_disk_rule(const Network& net);

nlohmann::json to_json(const Network& net);
Network network_from_json(const nlohmann::json& doc);

void save_network(const Network& net, const std::string& path);
Network load_network(const std::string& path);

}  // namespace drw
