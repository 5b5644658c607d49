#include "drw/geom_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>

#include <fmt/format.h>

#include "drw/errors.hpp"
#include "drw/rng.hpp"

namespace drw {

namespace {

std::vector<std::vector<NodeId>> disk_adjacency(const std::vector<Point>& pts, double radius)
{
    const std::size_t n = pts.size();
    std::vector<std::vector<NodeId>> lists(n);
    if (n < 2) {
        return lists;
    }
    const double r2 = radius * radius;

    // Bucket into square cells no narrower than the radius so that every
    // neighbor lies in the same or an adjacent cell.
    const auto cells = static_cast<std::size_t>(std::clamp(std::floor(1.0 / radius), 1.0, 4096.0));
    auto cell_of = [cells](double c) {
        auto k = static_cast<std::size_t>(c * static_cast<double>(cells));
        return std::min(k, cells - 1);
    };
    std::vector<std::vector<NodeId>> grid(cells * cells);
    for (NodeId v = 0; v < n; ++v) {
        grid[cell_of(pts[v].y) * cells + cell_of(pts[v].x)].push_back(v);
    }

    for (NodeId v = 0; v < n; ++v) {
        const std::size_t cx = cell_of(pts[v].x);
        const std::size_t cy = cell_of(pts[v].y);
        const std::size_t x0 = cx == 0 ? 0 : cx - 1;
        const std::size_t y0 = cy == 0 ? 0 : cy - 1;
        const std::size_t x1 = std::min(cx + 1, cells - 1);
        const std::size_t y1 = std::min(cy + 1, cells - 1);
        for (std::size_t gy = y0; gy <= y1; ++gy) {
            for (std::size_t gx = x0; gx <= x1; ++gx) {
                for (NodeId u : grid[gy * cells + gx]) {
                    if (u != v && squared_distance(pts[u], pts[v]) <= r2) {
                        lists[v].push_back(u);
                    }
                }
            }
        }
    }
    return lists;
}

void validate_point(const Point& p)
{
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
        throw Error(ErrorCode::InvalidGraph, fmt::format("point ({}, {}) outside the unit square", p.x, p.y));
    }
}

double cross(const Point& o, const Point& a, const Point& b)
{
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain; collinear boundary points are dropped.
std::vector<Point> convex_hull(std::vector<Point> pts)
{
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) {
        return pts;
    }
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) {
            --k;
        }
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) {
            --k;
        }
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace

Network Network::unit_disk(std::vector<Point> positions, double radius, std::uint64_t seed)
{
    if (!(radius > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "radius must be positive");
    }
    for (const Point& p : positions) {
        validate_point(p);
    }
    Network net;
    net.radius_ = std::min(radius, kMaxRadius);
    net.seed_ = seed;
    net.positions_ = std::move(positions);
    auto lists = disk_adjacency(net.positions_, net.radius_);
    net.assign_adjacency(lists);
    return net;
}

Network Network::from_edges(std::vector<Point> positions, double radius, std::span<const Edge> edges,
                            std::uint64_t seed)
{
    for (const Point& p : positions) {
        validate_point(p);
    }
    const std::size_t n = positions.size();
    std::vector<std::vector<NodeId>> lists(n);
    for (const auto& [u, v] : edges) {
        if (u >= n || v >= n) {
            throw Error(ErrorCode::InvalidGraph, fmt::format("edge ({}, {}) references a missing node", u, v));
        }
        if (u == v) {
            throw Error(ErrorCode::InvalidGraph, fmt::format("self-loop at node {}", u));
        }
        lists[u].push_back(v);
        lists[v].push_back(u);
    }
    for (auto& list : lists) {
        std::sort(list.begin(), list.end());
        if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
            throw Error(ErrorCode::InvalidGraph, "duplicate edge");
        }
    }
    Network net;
    net.radius_ = radius;
    net.seed_ = seed;
    net.positions_ = std::move(positions);
    net.assign_adjacency(lists);
    return net;
}

void Network::assign_adjacency(std::vector<std::vector<NodeId>>& lists)
{
    offsets_.assign(1, 0);
    targets_.clear();
    for (auto& list : lists) {
        std::sort(list.begin(), list.end());
        targets_.insert(targets_.end(), list.begin(), list.end());
        offsets_.push_back(targets_.size());
    }
}

const Point& Network::position(NodeId v) const
{
    if (v >= size()) {
        throw Error(ErrorCode::UnknownNode, fmt::format("node {} (n = {})", v, size()));
    }
    return positions_[v];
}

std::span<const NodeId> Network::neighbors(NodeId v) const
{
    if (v >= size()) {
        throw Error(ErrorCode::UnknownNode, fmt::format("node {} (n = {})", v, size()));
    }
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

bool Network::adjacent(NodeId u, NodeId v) const
{
    const auto list = neighbors(u);
    return std::binary_search(list.begin(), list.end(), v);
}

std::vector<Edge> Network::edges() const
{
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < size(); ++u) {
        for (NodeId v : neighbors(u)) {
            if (u < v) {
                out.emplace_back(u, v);
            }
        }
    }
    return out;
}

Network generate_network(const GraphGenConfig& cfg)
{
    if (cfg.n < 2) {
        throw Error(ErrorCode::InvalidConfig, "network needs at least two nodes");
    }
    if (!(cfg.r > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "radius must be positive");
    }
    if (cfg.max_attempts < 1) {
        throw Error(ErrorCode::InvalidConfig, "max_attempts must be at least 1");
    }
    const double radius = std::min(cfg.r, kMaxRadius);

    for (std::size_t attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        Rng rng(derive_seed(cfg.seed, "placement", attempt));
        std::vector<Point> pts(cfg.n);
        for (auto& p : pts) {
            p.x = rng.uniform01();
            p.y = rng.uniform01();
        }
        Network net;
        net.radius_ = radius;
        net.seed_ = cfg.seed;
        net.attempts_ = attempt + 1;
        net.positions_ = std::move(pts);
        auto lists = disk_adjacency(net.positions_, radius);
        net.assign_adjacency(lists);
        if (is_connected(net)) {
            return net;
        }
    }
    throw NotConnectedError(cfg.max_attempts);
}

std::span<const NodeId> neighbors(const Network& net, NodeId v)
{
    return net.neighbors(v);
}

bool is_connected(const Network& net)
{
    const std::size_t n = net.size();
    if (n <= 1) {
        return true;
    }
    std::vector<char> seen(n, 0);
    std::queue<NodeId> frontier;
    frontier.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const NodeId v = frontier.front();
        frontier.pop();
        for (NodeId u : net.neighbors(v)) {
            if (!seen[u]) {
                seen[u] = 1;
                ++reached;
                frontier.push(u);
            }
        }
    }
    return reached == n;
}

double max_pairwise_distance(std::span<const Point> points)
{
    if (points.size() < 2) {
        return 0.0;
    }
    // The farthest pair is always a pair of hull vertices.
    const auto hull = convex_hull({points.begin(), points.end()});
    double best = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        for (std::size_t j = i + 1; j < hull.size(); ++j) {
            best = std::max(best, squared_distance(hull[i], hull[j]));
        }
    }
    return std::sqrt(best);
}

double max_pairwise_distance(const Network& net)
{
    return max_pairwise_distance(std::span<const Point>(net.positions()));
}

bool satisfies_disk_rule(const Network& net)
{
    auto expected = disk_adjacency(net.positions(), net.radius());
    for (NodeId v = 0; v < net.size(); ++v) {
        std::sort(expected[v].begin(), expected[v].end());
        const auto actual = net.neighbors(v);
        if (!std::equal(actual.begin(), actual.end(), expected[v].begin(), expected[v].end())) {
            return false;
        }
    }
    return true;
}

nlohmann::json to_json(const Network& net)
{
    nlohmann::json positions = nlohmann::json::array();
    for (const Point& p : net.positions()) {
        positions.push_back({p.x, p.y});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [u, v] : net.edges()) {
        edges.push_back({u, v});
    }
    return {{"n", net.size()}, {"r", net.radius()}, {"seed", net.seed()},
            {"positions", std::move(positions)}, {"edges", std::move(edges)}};
}

Network network_from_json(const nlohmann::json& doc)
{
    try {
        const auto n = doc.at("n").get<std::size_t>();
        const auto r = doc.at("r").get<double>();
        const auto seed = doc.at("seed").get<std::uint64_t>();
        std::vector<Point> positions;
        for (const auto& p : doc.at("positions")) {
            positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        }
        if (positions.size() != n) {
            throw Error(ErrorCode::InvalidGraph, fmt::format("expected {} positions, found {}", n, positions.size()));
        }
        std::vector<Edge> edges;
        for (const auto& e : doc.at("edges")) {
            const auto u = e.at(0).get<NodeId>();
            const auto v = e.at(1).get<NodeId>();
            if (u >= v) {
                throw Error(ErrorCode::InvalidGraph, fmt::format("edge ({}, {}) is not ordered u < v", u, v));
            }
            edges.emplace_back(u, v);
        }
        return Network::from_edges(std::move(positions), r, edges, seed);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedInput, e.what());
    }
}

void save_network(const Network& net, const std::string& path)
{
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::MalformedInput, fmt::format("cannot write {}", path));
    }
    out << to_json(net).dump() << '\n';
}

Network load_network(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::MalformedInput, fmt::format("cannot read {}", path));
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedInput, e.what());
    }
    return network_from_json(doc);
}

}  // namespace drw
