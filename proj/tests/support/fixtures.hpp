#pragma once

#include <vector>

#include "drw/geom_graph.hpp"

namespace drw::testing {

inline std::vector<Point> line_positions(std::size_t n)
{
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back({static_cast<double>(i) / static_cast<double>(n), 0.5});
    }
    return pts;
}

inline Network explicit_network(std::size_t n, const std::vector<Edge>& edges)
{
    return Network::from_edges(line_positions(n), 0.0, edges);
}

/// Walk 0 at x first hops to y (with the right seed); y then chooses among
/// a, b, c, d, z whose marked-neighbor counts are 3, 2, 3, 2, 1. A corridor
/// z - t1 - t2 - t3 - t4 - q leads to walk 1's initiator q.
struct FanGraph {
    static constexpr NodeId x = 0, y = 1, a = 2, b = 3, c = 4, d = 5, z = 6;
    static constexpr NodeId m1 = 7, m2 = 8, m3 = 9;
    static constexpr NodeId t1 = 10, t2 = 11, t3 = 12, t4 = 13, q = 14;

    Network net = explicit_network(15, {
        {x, y}, {x, m1}, {x, m2}, {x, m3},
        {y, a}, {y, b}, {y, c}, {y, d}, {y, z},
        {a, m1}, {a, m2}, {b, m1}, {c, m2}, {c, m3}, {d, m3},
        {z, t1}, {t1, t2}, {t2, t3}, {t3, t4}, {t4, q},
    });
};

/// Hub 0 with five corridors ending in degree-1 tips 1, 4, 8, 16, 24.
/// Corridor lengths (excluding the hub): 3, 4, 8, 8, 6. Thirty nodes.
inline Network spider_graph()
{
    std::vector<Edge> edges;
    auto arm = [&](NodeId tip, NodeId last) {
        for (NodeId v = tip; v < last; ++v) {
            edges.emplace_back(v, v + 1);
        }
        edges.emplace_back(0, last);
    };
    arm(1, 3);
    arm(4, 7);
    arm(8, 15);
    arm(16, 23);
    arm(24, 29);
    return explicit_network(30, edges);
}

/// 0 - 1 - 3 - 4 - 5 - 6 with a dead-end leaf 2 hanging off 1.
inline Network branch_graph()
{
    return explicit_network(7, {{0, 1}, {1, 2}, {1, 3}, {3, 4}, {4, 5}, {5, 6}});
}

/// 0 - 1 - 2 - 3 (dead end) with a second branch 1 - 4 - 5 - 6.
inline Network dead_end_graph()
{
    return explicit_network(7, {{0, 1}, {1, 2}, {2, 3}, {1, 4}, {4, 5}, {5, 6}});
}

}  // namespace drw::testing
