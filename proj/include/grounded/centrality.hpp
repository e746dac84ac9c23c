#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "grounded/errors.hpp"
#include "grounded/graph.hpp"

namespace grounded {

inline std::vector<double> degree_centrality(const Graph& g) {
    std::vector<double> score(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) score[v] = static_cast<double>(g.degree(v));
    return score;
}

/// Leading eigenvector of the adjacency matrix by power iteration.
///
/// Iterates with A + I, which has the same eigenvectors but a strictly
/// dominant leading eigenvalue on bipartite graphs too. Stops when the
/// relative 2-norm change of the iterate is at most `tolerance`.
inline std::vector<double> eigenvector_centrality(const Graph& g, double tolerance = 1e-8,
                                                  std::size_t max_iterations = 100000) {
    const std::size_t n = g.num_nodes();
    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n))), y(n);
    for (std::size_t it = 0; it < max_iterations; ++it) {
        for (NodeId v = 0; v < n; ++v) {
            double acc = x[v];
            for (NodeId w : g.neighbors(v)) acc += x[w];
            y[v] = acc;
        }
        const double norm = std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0));
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] /= norm;
            diff += (y[i] - x[i]) * (y[i] - x[i]);
        }
        x.swap(y);
        if (std::sqrt(diff) <= tolerance) return x;
    }
    throw ConvergenceError("eigenvector centrality did not converge", 0.0);
}

/// Exact Brandes betweenness, each unordered pair counted once.
inline std::vector<double> betweenness_centrality(const Graph& g) {
    const std::size_t n = g.num_nodes();
    std::vector<double> bc(n, 0.0), sigma(n), delta(n);
    std::vector<std::int64_t> dist(n);
    std::vector<NodeId> order, queue;
    order.reserve(n);
    queue.reserve(n);
    for (NodeId s = 0; s < n; ++s) {
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        std::fill(dist.begin(), dist.end(), -1);
        order.clear();
        queue.clear();
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            NodeId v = queue[head];
            order.push_back(v);
            for (NodeId w : g.neighbors(v)) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            NodeId w = *it;
            for (NodeId v : g.neighbors(w)) {
                if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if (w != s) bc[w] += delta[w];
        }
    }
    for (auto& b : bc) b /= 2.0;
    return bc;
}

/// (n - 1) / sum of BFS distances; nodes that reach nobody score 0.
inline std::vector<double> closeness_centrality(const Graph& g) {
    const std::size_t n = g.num_nodes();
    std::vector<double> score(n, 0.0);
    std::vector<std::int64_t> dist(n);
    std::vector<NodeId> queue;
    queue.reserve(n);
    for (NodeId s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        queue.clear();
        dist[s] = 0;
        queue.push_back(s);
        std::int64_t total = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            NodeId v = queue[head];
            total += dist[v];
            for (NodeId w : g.neighbors(v)) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        if (total > 0) score[s] = static_cast<double>(n - 1) / static_cast<double>(total);
    }
    return score;
}

/// Ids of the k highest scores, ties to the smaller id. Scores are compared
/// after quantizing to 1e-12 of the largest magnitude so that round-off
/// between structurally equal nodes does not decide the order.
inline std::vector<NodeId> top_k(const std::vector<double>& score, std::size_t k) {
    double scale = 0.0;
    for (double s : score) scale = std::max(scale, std::abs(s));
    std::vector<std::int64_t> key(score.size(), 0);
    if (scale > 0.0) {
        for (std::size_t i = 0; i < score.size(); ++i) key[i] = std::llround(score[i] / scale * 1e12);
    }
    std::vector<NodeId> ids(score.size());
    std::iota(ids.begin(), ids.end(), NodeId{0});
    k = std::min(k, ids.size());
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(),
                      [&](NodeId a, NodeId b) { return key[a] != key[b] ? key[a] > key[b] : a < b; });
    ids.resize(k);
    return ids;
}

}  // namespace grounded
