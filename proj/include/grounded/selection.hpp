#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grounded/centrality.hpp"
#include "grounded/eigensolvers.hpp"
#include "grounded/errors.hpp"
#include "grounded/graph.hpp"
#include "grounded/grounded_operator.hpp"

namespace grounded {

enum class Method { optimum, naive, fast, degree, eigenvector, betweenness, closeness };

inline constexpr Method all_methods[] = {Method::optimum,     Method::naive,       Method::fast,     Method::degree,
                                         Method::eigenvector, Method::betweenness, Method::closeness};

inline std::string_view to_string(Method m) {
    switch (m) {
        case Method::optimum: return "optimum";
        case Method::naive: return "naive";
        case Method::fast: return "fast";
        case Method::degree: return "degree";
        case Method::eigenvector: return "eigenvector";
        case Method::betweenness: return "betweenness";
        case Method::closeness: return "closeness";
    }
    return "unknown";
}

inline std::optional<Method> parse_method(std::string_view name) {
    for (Method m : all_methods) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

inline bool is_baseline(Method m) {
    return m == Method::degree || m == Method::eigenvector || m == Method::betweenness || m == Method::closeness;
}

struct GapScore {
    NodeId node;
    double score;
};

struct Pick {
    NodeId node;
    /// lambda(S) right after this node joined S.
    double lambda;
    /// Wall time spent deciding this pick.
    double ms;
};

struct SelectionResult {
    Method method{};
    std::vector<Pick> picks;
    double final_lambda = 0.0;
    std::size_t k = 0;
    double eps = 0.0;
    std::uint64_t seed = 0;

    std::vector<NodeId> nodes() const {
        std::vector<NodeId> out;
        out.reserve(picks.size());
        for (const auto& p : picks) out.push_back(p.node);
        return out;
    }
    NodeSet node_set(std::size_t universe) const { return NodeSet::of(universe, nodes()); }
};

namespace detail {

using clock = std::chrono::steady_clock;

inline double elapsed_ms(clock::time_point since) {
    return std::chrono::duration<double, std::milli>(clock::now() - since).count();
}

inline void check_k(const Graph& g, std::size_t k) {
    if (k < 1 || k + 1 > g.num_nodes()) {
        throw GuardError("k must satisfy 1 <= k <= n-1 (k=" + std::to_string(k) +
                         ", n=" + std::to_string(g.num_nodes()) + ")");
    }
}

/// Index of the best value; values within 1e-12 relative of the running best
/// count as ties and keep the earlier (smaller-id) entry.
inline std::size_t argmax_first(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double tol = 1e-12 * std::max(1.0, std::abs(values[best]));
        if (values[i] > values[best] + tol) best = i;
    }
    return best;
}

}  // namespace detail

/// Pair used for S = empty: lambda = 0 with the uniform unit vector over all nodes.
inline EigenPair empty_set_pair(std::size_t n) {
    EigenPair p;
    p.lambda = 0.0;
    p.u = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / std::sqrt(static_cast<double>(n)));
    return p;
}

/// lambda(S) from the chosen iterative eigensolver; 0 for the empty set.
inline double grounded_lambda(const Graph& g, const NodeSet& s, double eps,
                              EigenSolverKind kind = EigenSolverKind::inverse_power) {
    if (s.empty()) return 0.0;
    return smallest_eigenpair(GroundedOperator(g, s), eps, kind).lambda;
}

/// lambda(S) from the dense oracle; 0 for the empty set.
inline double grounded_lambda_dense(const Graph& g, const NodeSet& s) {
    if (s.empty()) return 0.0;
    return dense_lambda(GroundedOperator(g, s));
}

/// First-order estimate of lambda(S + j) - lambda(S) for every j in V\S:
/// 2 u_j sum_{i in N(j)\S} u_i. `pair` is the smallest pair of L(S), or
/// empty_set_pair(n) when S is empty. Scores are in ascending node order.
inline std::vector<GapScore> gap_estimates(const Graph& g, const NodeSet& s, const EigenPair& pair) {
    const std::size_t n = g.num_nodes();
    if (s.universe() != n) throw std::invalid_argument("node set universe does not match graph");
    if (static_cast<std::size_t>(pair.u.size()) != n - s.size()) {
        throw std::invalid_argument("eigenpair does not belong to this grounded set (dimension mismatch)");
    }
    // u scattered to node ids, zero on S.
    std::vector<double> u(n, 0.0);
    Eigen::Index local = 0;
    for (NodeId v = 0; v < n; ++v) {
        if (!s.contains(v)) u[v] = pair.u[local++];
    }
    std::vector<GapScore> scores;
    scores.reserve(n - s.size());
    for (NodeId j = 0; j < n; ++j) {
        if (s.contains(j)) continue;
        double acc = 0.0;
        for (NodeId i : g.neighbors(j)) acc += u[i];
        scores.push_back({j, 2.0 * u[j] * acc});
    }
    return scores;
}

/// lambda(S + j) - lambda(S). Both eigenvalues come from the dense oracle
/// when it fits, otherwise from inverse power at `eps`.
inline double exact_gap(const Graph& g, const NodeSet& s, NodeId j, double eps = 1e-8) {
    if (s.contains(j)) throw std::invalid_argument("candidate already grounded");
    const NodeSet t = s.with(j);
    if (g.num_nodes() - s.size() <= dense_oracle_cap) {
        return grounded_lambda_dense(g, t) - grounded_lambda_dense(g, s);
    }
    return grounded_lambda(g, t, eps) - grounded_lambda(g, s, eps);
}

struct FastOptions {
    double eps = 1e-3;
    EigenSolverKind solver = EigenSolverKind::inverse_power;
};

/// Derivative-based greedy: each round computes the smallest pair of the
/// current L(S), scores every candidate with gap_estimates and grounds the
/// best one. The first round uses the S = empty convention, so it picks a
/// maximum-degree node.
inline SelectionResult fast_greedy(const Graph& g, std::size_t k, const FastOptions& options = {}) {
    detail::check_k(g, k);
    SelectionResult result;
    result.method = Method::fast;
    result.k = k;
    result.eps = options.eps;

    NodeSet s(g.num_nodes());
    std::vector<double> values;
    for (std::size_t round = 0; round < k; ++round) {
        const auto start = detail::clock::now();
        EigenPair pair;
        if (s.empty()) {
            pair = empty_set_pair(g.num_nodes());
        } else {
            pair = smallest_eigenpair(GroundedOperator(g, s), options.eps, options.solver);
            result.picks.back().lambda = pair.lambda;
        }
        const auto scores = gap_estimates(g, s, pair);
        values.resize(scores.size());
        for (std::size_t i = 0; i < scores.size(); ++i) values[i] = scores[i].score;
        const NodeId best = scores[detail::argmax_first(values)].node;
        s.insert(best);
        result.picks.push_back({best, std::numeric_limits<double>::quiet_NaN(), detail::elapsed_ms(start)});
    }
    result.final_lambda = smallest_eigenpair(GroundedOperator(g, s), options.eps, options.solver).lambda;
    result.picks.back().lambda = result.final_lambda;
    return result;
}

inline SelectionResult fast_greedy(const Graph& g, std::size_t k, double eps) {
    return fast_greedy(g, k, FastOptions{eps, EigenSolverKind::inverse_power});
}

struct NaiveOptions {
    double eps = 1e-3;
    /// Candidates are evaluated with the dense oracle up to this many nodes,
    /// above it with inverse power at eps / 10.
    std::size_t dense_threshold = 256;
};

/// Greedy on exact gaps: each round evaluates lambda(S + j) for every
/// candidate and grounds the maximizer.
inline SelectionResult naive_greedy(const Graph& g, std::size_t k, const NaiveOptions& options = {}) {
    detail::check_k(g, k);
    SelectionResult result;
    result.method = Method::naive;
    result.k = k;
    result.eps = options.eps;
    const bool dense = g.num_nodes() <= options.dense_threshold;

    NodeSet s(g.num_nodes());
    std::vector<NodeId> candidates;
    std::vector<double> lambdas;
    for (std::size_t round = 0; round < k; ++round) {
        const auto start = detail::clock::now();
        candidates.clear();
        lambdas.clear();
        for (NodeId j = 0; j < g.num_nodes(); ++j) {
            if (s.contains(j)) continue;
            const NodeSet t = s.with(j);
            candidates.push_back(j);
            lambdas.push_back(dense ? grounded_lambda_dense(g, t) : grounded_lambda(g, t, options.eps / 10));
        }
        // lambda(S) is common to every candidate, so the largest lambda(S + j)
        // is the largest gap.
        const std::size_t best = detail::argmax_first(lambdas);
        s.insert(candidates[best]);
        result.picks.push_back({candidates[best], lambdas[best], detail::elapsed_ms(start)});
    }
    result.final_lambda = grounded_lambda(g, s, options.eps);
    return result;
}

inline SelectionResult naive_greedy(const Graph& g, std::size_t k, double eps) {
    NaiveOptions options;
    options.eps = eps;
    return naive_greedy(g, k, options);
}

/// C(n, k), saturating at the uint64 maximum.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        acc = acc * (n - k + i) / i;
        if (acc > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(acc);
}

inline constexpr std::uint64_t brute_force_cap = 10'000'000;

/// Exhaustive search over all k-subsets, each scored by the dense oracle.
/// Among values equal within 1e-12 the subset whose L(S) has the smaller
/// largest eigenvalue wins, then the lexicographically smallest.
/// final_lambda is the dense-oracle value of the winner; picks list the
/// winner ascending with prefix lambdas.
inline SelectionResult brute_force_optimum(const Graph& g, std::size_t k, std::uint64_t max_subsets = brute_force_cap) {
    detail::check_k(g, k);
    const std::size_t n = g.num_nodes();
    if (binomial(n, k) > max_subsets) {
        throw GuardError("brute force over C(" + std::to_string(n) + "," + std::to_string(k) + ") subsets exceeds cap");
    }
    if (n - 1 > dense_oracle_cap) throw GuardError("brute force requires the dense oracle");

    const auto start = detail::clock::now();
    std::vector<NodeId> combo(k);
    std::iota(combo.begin(), combo.end(), NodeId{0});
    std::vector<NodeId> best_combo = combo;
    double best = -1.0, best_top = 0.0;
    for (;;) {
        const GroundedOperator op(g, NodeSet::of(n, combo));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.to_dense(), Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
        const double value = es.eigenvalues()[0];
        const double top = es.eigenvalues()[es.eigenvalues().size() - 1];
        const bool tied = std::abs(value - best) <= 1e-12;
        if ((!tied && value > best) || (tied && top < best_top - 1e-12)) {
            best = value;
            best_top = top;
            best_combo = combo;
        }
        // Next combination in lexicographic order.
        std::size_t i = k;
        while (i > 0 && combo[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++combo[i - 1];
        for (std::size_t j = i; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
    const double search_ms = detail::elapsed_ms(start);

    SelectionResult result;
    result.method = Method::optimum;
    result.k = k;
    NodeSet prefix(n);
    for (NodeId v : best_combo) {
        prefix.insert(v);
        result.picks.push_back({v, grounded_lambda_dense(g, prefix), 0.0});
    }
    result.picks.back().ms = search_ms;
    result.final_lambda = best;
    return result;
}

/// Scores behind a baseline ranking.
inline std::vector<double> centrality_scores(const Graph& g, Method method) {
    switch (method) {
        case Method::degree: return degree_centrality(g);
        case Method::eigenvector: return eigenvector_centrality(g);
        case Method::betweenness: return betweenness_centrality(g);
        case Method::closeness: return closeness_centrality(g);
        default: throw std::invalid_argument("not a baseline method: " + std::string(to_string(method)));
    }
}

/// Top-k nodes of a static centrality; prefix lambdas from the iterative
/// eigensolver. Ranking time is charged to the first pick.
inline SelectionResult baseline_select(const Graph& g, std::size_t k, Method method, const FastOptions& options = {}) {
    detail::check_k(g, k);
    const auto start = detail::clock::now();
    const auto ranked = top_k(centrality_scores(g, method), k);
    const double rank_ms = detail::elapsed_ms(start);

    SelectionResult result;
    result.method = method;
    result.k = k;
    result.eps = options.eps;
    NodeSet s(g.num_nodes());
    for (NodeId v : ranked) {
        s.insert(v);
        result.picks.push_back({v, grounded_lambda(g, s, options.eps, options.solver), 0.0});
    }
    result.picks.front().ms = rank_ms;
    result.final_lambda = result.picks.back().lambda;
    return result;
}

/// Dispatch by method name.
inline SelectionResult select(const Graph& g, std::size_t k, Method method, const FastOptions& options = {}) {
    switch (method) {
        case Method::optimum: {
            auto r = brute_force_optimum(g, k);
            r.eps = options.eps;
            return r;
        }
        case Method::naive: return naive_greedy(g, k, options.eps);
        case Method::fast: return fast_greedy(g, k, options);
        default: return baseline_select(g, k, method, options);
    }
}

/// Pearson correlation coefficient; NaN when either side has zero variance.
inline double pearson_correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) throw std::invalid_argument("pearson: size mismatch or empty input");
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sab / std::sqrt(saa * sbb);
}

}  // namespace grounded
