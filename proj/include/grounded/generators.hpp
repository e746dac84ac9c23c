#pragma once

#include <cstdint>
#include <numeric>
#include <unordered_set>
#include <vector>

#include "grounded/errors.hpp"
#include "grounded/graph.hpp"
#include "grounded/rng.hpp"

namespace grounded {

inline Graph path_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph::from_edges(n, edges);
}

inline Graph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    }
    return Graph::from_edges(n, edges);
}

/// Star with center 0 and `leaves` leaves.
inline Graph star_graph(std::size_t leaves) {
    std::vector<Edge> edges;
    for (NodeId i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
    return Graph::from_edges(leaves + 1, edges);
}

inline Graph cycle_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) edges.emplace_back(i, static_cast<NodeId>((i + 1) % n));
    return Graph::from_edges(n, edges);
}

/// Connected simple d-regular graph from the pairing (configuration) model.
/// Pairings with loops, multi-edges or more than one component are rejected
/// and redrawn from the same generator stream.
inline Graph random_regular_graph(std::size_t n, std::size_t d, std::uint64_t seed, std::size_t max_attempts = 10000) {
    if ((n * d) % 2 != 0) throw GuardError("n*d must be even for a d-regular graph");
    if (d >= n) throw GuardError("degree must be smaller than node count");
    if (d == 0) throw GuardError("degree must be positive");

    SplitMix64 rng(seed);
    std::vector<NodeId> points(n * d);
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = static_cast<NodeId>(i / d);

    std::unordered_set<std::uint64_t> seen;
    std::vector<Edge> edges;
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        rng.shuffle(std::span<NodeId>(points));
        seen.clear();
        edges.clear();
        bool simple = true;
        for (std::size_t i = 0; i < points.size(); i += 2) {
            NodeId u = points[i], v = points[i + 1];
            if (u == v) { simple = false; break; }
            if (u > v) std::swap(u, v);
            if (!seen.insert((std::uint64_t{u} << 32) | v).second) { simple = false; break; }
            edges.emplace_back(u, v);
        }
        if (!simple) continue;
        Graph g = Graph::from_edges(n, edges);
        if (g.is_connected()) return g;
    }
    throw GuardError("random_regular_graph: retry budget exhausted");
}

/// Uniform G(n, m): m distinct non-loop edges. With `connected`, whole
/// graphs are redrawn until connected.
inline Graph random_gnm_graph(std::size_t n, std::size_t m, std::uint64_t seed, bool connected = false,
                              std::size_t max_attempts = 1000) {
    if (n < 2 || m > n * (n - 1) / 2) throw GuardError("random_gnm_graph: infeasible edge count");
    SplitMix64 rng(seed);
    std::unordered_set<std::uint64_t> seen;
    std::vector<Edge> edges;
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        seen.clear();
        seen.reserve(m * 2);
        edges.clear();
        edges.reserve(m);
        while (edges.size() < m) {
            auto u = static_cast<NodeId>(rng.below(n));
            auto v = static_cast<NodeId>(rng.below(n));
            if (u == v) continue;
            if (u > v) std::swap(u, v);
            if (seen.insert((std::uint64_t{u} << 32) | v).second) edges.emplace_back(u, v);
        }
        Graph g = Graph::from_edges(n, edges);
        if (!connected || g.is_connected()) return g;
    }
    throw GuardError("random_gnm_graph: no connected sample within retry budget");
}

/// `count` distinct ids from [0, n), in draw order (partial Fisher-Yates).
inline std::vector<NodeId> sample_nodes(std::size_t n, std::size_t count, SplitMix64& rng) {
    if (count > n) throw GuardError("cannot sample more nodes than the graph has");
    std::vector<NodeId> pool(n);
    std::iota(pool.begin(), pool.end(), NodeId{0});
    for (std::size_t i = 0; i < count; ++i) {
        auto j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

}  // namespace grounded
