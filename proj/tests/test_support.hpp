#pragma once

// Fixtures and independent oracles shared by the unit and acceptance suites.
// Nothing here calls the library's solvers; the oracles work on explicit
// dense matrices built straight from the edge list.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "grounded/grounded.hpp"

namespace grounded::fixtures {

inline Graph p7() {
    std::istringstream in("1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n");
    return parse_edge_list(in);
}

/// Internal ids of the given external labels.
inline NodeSet labels_to_set(const Graph& g, std::initializer_list<Label> labels) {
    NodeSet s(g.num_nodes());
    for (Label l : labels) s.insert(*g.find_label(l));
    return s;
}

/// L(S) assembled from the edge list, independent of GroundedOperator.
inline Eigen::MatrixXd grounded_laplacian_dense(const Graph& g, const NodeSet& s) {
    const auto n = static_cast<Eigen::Index>(g.num_nodes());
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (auto [u, v] : g.edges()) {
        lap(u, v) -= 1.0;
        lap(v, u) -= 1.0;
        lap(u, u) += 1.0;
        lap(v, v) += 1.0;
    }
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!s.contains(static_cast<NodeId>(i))) keep.push_back(i);
    }
    const auto d = static_cast<Eigen::Index>(keep.size());
    Eigen::MatrixXd out(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) out(a, b) = lap(keep[a], keep[b]);
    }
    return out;
}

/// Cyclic Jacobi rotations; returns eigenvalues ascending.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, double tol = 1e-14) {
    const Eigen::Index n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        }
        if (std::sqrt(off) <= tol * std::max(1.0, a.norm())) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

inline double jacobi_lambda(const Graph& g, const NodeSet& s) {
    return jacobi_eigenvalues(grounded_laplacian_dense(g, s)).front();
}

/// Seeded connected G(n, m) corpus.
inline std::vector<Graph> random_corpus(std::size_t count, std::size_t n_min, std::size_t n_max, double mean_degree,
                                        std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<Graph> out;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t n = n_min + static_cast<std::size_t>(rng.below(n_max - n_min + 1));
        const auto m = static_cast<std::size_t>(std::llround(mean_degree * static_cast<double>(n) / 2.0));
        out.push_back(random_gnm_graph(n, std::max(m, n - 1), rng.next(), true));
    }
    return out;
}

/// Small deterministic corpus: paths, cycles, stars, complete graphs, random graphs.
inline std::vector<Graph> small_corpus() {
    std::vector<Graph> out{p7(), path_graph(10), cycle_graph(9), star_graph(6), complete_graph(5), complete_graph(8)};
    for (auto& g : random_corpus(14, 12, 40, 4.0, 99)) out.push_back(std::move(g));
    return out;
}

/// Betweenness by counting shortest paths through each node for every pair,
/// from all-pairs BFS distances and path counts.
inline std::vector<double> betweenness_by_pairs(const Graph& g) {
    const std::size_t n = g.num_nodes();
    std::vector<std::vector<long>> dist(n, std::vector<long>(n, -1));
    std::vector<std::vector<double>> count(n, std::vector<double>(n, 0.0));
    for (NodeId s = 0; s < n; ++s) {
        std::vector<NodeId> q{s};
        dist[s][s] = 0;
        count[s][s] = 1;
        for (std::size_t h = 0; h < q.size(); ++h) {
            for (NodeId w : g.neighbors(q[h])) {
                if (dist[s][w] < 0) {
                    dist[s][w] = dist[s][q[h]] + 1;
                    q.push_back(w);
                }
                if (dist[s][w] == dist[s][q[h]] + 1) count[s][w] += count[s][q[h]];
            }
        }
    }
    std::vector<double> bc(n, 0.0);
    for (NodeId s = 0; s < n; ++s) {
        for (NodeId t = s + 1; t < n; ++t) {
            if (dist[s][t] < 0) continue;
            for (NodeId v = 0; v < n; ++v) {
                if (v == s || v == t || dist[s][v] < 0 || dist[v][t] < 0) continue;
                if (dist[s][v] + dist[v][t] == dist[s][t]) bc[v] += count[s][v] * count[v][t] / count[s][t];
            }
        }
    }
    return bc;
}

}  // namespace grounded::fixtures
