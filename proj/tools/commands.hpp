#pragma once

// Subcommand implementations for the `grounded` CLI. Kept out of main() so
// tests can drive them with in-memory streams.

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "grounded/grounded.hpp"

namespace grounded::cli {

enum class OutputFormat { json, csv };

struct RunConfig {
    std::string input_path;
    std::vector<Method> methods{Method::fast};
    std::size_t k = 1;
    double eps = 1e-3;
    std::uint64_t seed = 0;
    EigenSolverKind solver = EigenSolverKind::inverse_power;
    OutputFormat format = OutputFormat::json;
    std::string output_path;
    std::string label_map_path;

    // sweep
    std::size_t k_max = 1;
    // gap-compare
    std::size_t set_size = 5;
    std::vector<Label> grounded_labels;
    // solver-bench
    std::vector<std::size_t> sizes;
    std::size_t trials = 5;
    std::size_t mean_degree = 10;

    void validate() const {
        if (!(eps > 0.0 && eps < 1.0)) throw GuardError("eps must lie in (0, 1)");
        if (k < 1) throw GuardError("k must be at least 1");
        if (methods.empty()) throw GuardError("no method given");
    }
};

inline constexpr std::size_t naive_node_cap = 50'000;
inline constexpr std::size_t path_centrality_node_cap = 100'000;
inline constexpr std::size_t gap_compare_node_cap = 2000;

inline std::string format_double(double x) {
    if (!std::isfinite(x)) return "nan";
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
}

/// Parses the edge list and keeps its largest connected component.
inline Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file '" + path + "'");
    return largest_connected_component(parse_edge_list(in));
}

inline void check_method_size(const Graph& g, Method method) {
    if (method == Method::naive && g.num_nodes() > naive_node_cap) {
        throw GuardError("naive greedy is limited to " + std::to_string(naive_node_cap) + " nodes");
    }
    if ((method == Method::betweenness || method == Method::closeness) && g.num_nodes() > path_centrality_node_cap) {
        throw GuardError(std::string(to_string(method)) + " is limited to " +
                         std::to_string(path_centrality_node_cap) + " nodes");
    }
}

inline SelectionResult run_method(const Graph& g, std::size_t k, Method method, const RunConfig& config) {
    check_method_size(g, method);
    auto result = select(g, k, method, FastOptions{config.eps, config.solver});
    result.seed = config.seed;
    return result;
}

inline nlohmann::json to_json(const Graph& g, const SelectionResult& r) {
    nlohmann::json j;
    j["method"] = std::string(to_string(r.method));
    j["k"] = r.k;
    j["eps"] = r.eps;
    j["n"] = g.num_nodes();
    j["m"] = g.num_edges();
    j["selected"] = nlohmann::json::array();
    j["iterations"] = nlohmann::json::array();
    for (const auto& p : r.picks) {
        j["selected"].push_back(g.label(p.node));
        j["iterations"].push_back({{"node", g.label(p.node)}, {"lambda", p.lambda}, {"ms", p.ms}});
    }
    j["lambda"] = r.final_lambda;
    return j;
}

inline void write_label_map_if_requested(const Graph& g, const RunConfig& config) {
    if (config.label_map_path.empty()) return;
    std::ofstream out(config.label_map_path);
    if (!out) throw GuardError("cannot write label map to '" + config.label_map_path + "'");
    write_label_map_csv(g, out);
}

/// `select`: one method, one k.
inline SelectionResult cmd_select(const RunConfig& config, std::ostream& out) {
    config.validate();
    if (config.methods.size() != 1) throw GuardError("select takes exactly one method");
    const Graph g = load_graph(config.input_path);
    write_label_map_if_requested(g, config);
    auto result = run_method(g, config.k, config.methods.front(), config);
    if (config.format == OutputFormat::json) {
        out << to_json(g, result).dump(2) << '\n';
    } else {
        out << "step,node,lambda,ms\n";
        for (std::size_t i = 0; i < result.picks.size(); ++i) {
            const auto& p = result.picks[i];
            out << i + 1 << ',' << g.label(p.node) << ',' << format_double(p.lambda) << ',' << format_double(p.ms)
                << '\n';
        }
    }
    return result;
}

struct SweepRow {
    Method method;
    std::size_t k;
    double lambda;
    double cumulative_ms;
};

/// Rows for k = 1..k_max of one method on an already loaded graph. Greedy
/// and ranking methods are prefix-closed, so a single k_max run serves every
/// k; the exhaustive optimum is rerun per k.
inline std::vector<SweepRow> sweep_rows(const Graph& g, Method method, std::size_t k_max, const RunConfig& config) {
    if (k_max < 1 || k_max + 1 > g.num_nodes()) {
        throw GuardError("k_max must satisfy 1 <= k_max <= n-1");
    }
    std::vector<SweepRow> rows;
    if (method == Method::optimum) {
        double total = 0.0;
        for (std::size_t k = 1; k <= k_max; ++k) {
            auto r = run_method(g, k, method, config);
            for (const auto& p : r.picks) total += p.ms;
            rows.push_back({method, k, r.final_lambda, total});
        }
        return rows;
    }
    auto r = run_method(g, k_max, method, config);
    double total = 0.0;
    for (std::size_t i = 0; i < r.picks.size(); ++i) {
        total += r.picks[i].ms;
        rows.push_back({method, i + 1, r.picks[i].lambda, total});
    }
    return rows;
}

/// `sweep`: CSV "method,k,lambda,cumulative_ms" for every requested method.
inline std::vector<SweepRow> cmd_sweep(const RunConfig& config, std::ostream& out) {
    config.validate();
    if (config.format != OutputFormat::csv) throw GuardError("sweep writes csv only");
    const Graph g = load_graph(config.input_path);
    write_label_map_if_requested(g, config);
    std::vector<SweepRow> all;
    for (Method m : config.methods) {
        auto rows = sweep_rows(g, m, config.k_max, config);
        all.insert(all.end(), rows.begin(), rows.end());
    }
    out << "method,k,lambda,cumulative_ms\n";
    for (const auto& row : all) {
        out << to_string(row.method) << ',' << row.k << ',' << format_double(row.lambda) << ','
            << format_double(row.cumulative_ms) << '\n';
    }
    return all;
}

struct GapRow {
    NodeId node;
    double exact;
    double estimated;
};

struct GapComparison {
    NodeSet grounded;
    std::vector<GapRow> rows;
    double pearson = 0.0;
};

/// Exact and first-order gaps for every candidate of a fixed grounded set.
inline GapComparison compare_gaps(const Graph& g, const NodeSet& s, double eps, EigenSolverKind solver) {
    if (g.num_nodes() > gap_compare_node_cap) {
        throw GuardError("gap comparison needs the dense oracle; limited to " +
                         std::to_string(gap_compare_node_cap) + " nodes");
    }
    if (s.size() + 1 >= g.num_nodes()) throw GuardError("grounded set leaves fewer than two candidates");
    GapComparison cmp{s, {}, 0.0};
    const EigenPair pair =
        s.empty() ? empty_set_pair(g.num_nodes()) : smallest_eigenpair(GroundedOperator(g, s), eps, solver);
    const auto estimates = gap_estimates(g, s, pair);
    const double base = grounded_lambda_dense(g, s);
    std::vector<double> exact, approx;
    for (const auto& e : estimates) {
        const double value = grounded_lambda_dense(g, s.with(e.node)) - base;
        cmp.rows.push_back({e.node, value, e.score});
        exact.push_back(value);
        approx.push_back(e.score);
    }
    cmp.pearson = pearson_correlation(exact, approx);
    return cmp;
}

/// Grounded set for gap-compare: explicit labels if given, else a seeded sample.
inline NodeSet gap_compare_set(const Graph& g, const RunConfig& config) {
    NodeSet s(g.num_nodes());
    if (!config.grounded_labels.empty()) {
        for (Label l : config.grounded_labels) {
            auto id = g.find_label(l);
            if (!id) throw GuardError("label " + std::to_string(l) + " is not in the largest component");
            s.insert(*id);
        }
        return s;
    }
    SplitMix64 rng(config.seed);
    for (NodeId v : sample_nodes(g.num_nodes(), config.set_size, rng)) s.insert(v);
    return s;
}

/// `gap-compare`: CSV "node,exact_gap,estimated_gap", then comment lines with
/// the grounded set and the Pearson correlation.
inline GapComparison cmd_gap_compare(const RunConfig& config, std::ostream& out) {
    config.validate();
    if (config.format != OutputFormat::csv) throw GuardError("gap-compare writes csv only");
    const Graph g = load_graph(config.input_path);
    write_label_map_if_requested(g, config);
    if (g.num_nodes() > gap_compare_node_cap) {
        throw GuardError("gap comparison limited to " + std::to_string(gap_compare_node_cap) + " nodes");
    }
    const NodeSet s = gap_compare_set(g, config);
    auto cmp = compare_gaps(g, s, config.eps, config.solver);
    out << "node,exact_gap,estimated_gap\n";
    for (const auto& row : cmp.rows) {
        out << g.label(row.node) << ',' << format_double(row.exact) << ',' << format_double(row.estimated) << '\n';
    }
    out << "# grounded=";
    for (std::size_t i = 0; i < s.members().size(); ++i) out << (i ? " " : "") << g.label(s.members()[i]);
    out << "\n# pearson=" << format_double(cmp.pearson) << '\n';
    return cmp;
}

struct BenchCell {
    std::size_t n = 0;
    std::size_t m = 0;
    EigenSolverKind solver{};
    double mean_ms = 0.0;
    std::size_t failures = 0;
    std::vector<double> lambdas;  // NaN where the solve failed
};

struct BenchGraphResult {
    BenchCell inverse_power;
    BenchCell lanczos;
    /// Largest |lambda_lanczos - lambda_inverse_power| / lambda_inverse_power over trials.
    double max_rel_diff = 0.0;
};

/// Times both eigensolvers on `trials` grounded sets with |S| uniform in 1..10.
inline BenchGraphResult bench_graph(const Graph& g, std::size_t trials, double eps, SplitMix64& rng) {
    BenchGraphResult out;
    out.inverse_power = {g.num_nodes(), g.num_edges(), EigenSolverKind::inverse_power, 0.0, 0, {}};
    out.lanczos = {g.num_nodes(), g.num_edges(), EigenSolverKind::lanczos, 0.0, 0, {}};
    const std::size_t max_size = std::min<std::size_t>(10, g.num_nodes() - 1);
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t size = 1 + static_cast<std::size_t>(rng.below(max_size));
        const GroundedOperator op(g, NodeSet::of(g.num_nodes(), sample_nodes(g.num_nodes(), size, rng)));
        for (BenchCell* cell : {&out.inverse_power, &out.lanczos}) {
            const auto start = detail::clock::now();
            try {
                const double lambda = smallest_eigenpair(op, eps, cell->solver).lambda;
                cell->mean_ms += detail::elapsed_ms(start);
                cell->lambdas.push_back(lambda);
            } catch (const Error&) {
                ++cell->failures;
                cell->lambdas.push_back(std::numeric_limits<double>::quiet_NaN());
            }
        }
        const double a = out.inverse_power.lambdas.back(), b = out.lanczos.lambdas.back();
        if (std::isfinite(a) && std::isfinite(b)) out.max_rel_diff = std::max(out.max_rel_diff, std::abs(a - b) / a);
    }
    for (BenchCell* cell : {&out.inverse_power, &out.lanczos}) {
        const std::size_t ok = trials - cell->failures;
        cell->mean_ms = ok ? cell->mean_ms / static_cast<double>(ok) : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

/// `solver-bench`: CSV "n,m,method,ms,failures,max_rel_diff". Graphs are the
/// input file (when given) followed by G(n, mean_degree * n / 2) samples for
/// each requested n, reduced to their largest component.
inline std::vector<BenchGraphResult> cmd_solver_bench(const RunConfig& config, std::ostream& out) {
    if (!(config.eps > 0.0 && config.eps < 1.0)) throw GuardError("eps must lie in (0, 1)");
    if (config.format != OutputFormat::csv) throw GuardError("solver-bench writes csv only");
    std::vector<Graph> graphs;
    if (!config.input_path.empty()) graphs.push_back(load_graph(config.input_path));
    for (std::size_t i = 0; i < config.sizes.size(); ++i) {
        const std::size_t n = config.sizes[i];
        const std::size_t m = std::min(n * config.mean_degree / 2, n * (n - 1) / 2);
        graphs.push_back(largest_connected_component(random_gnm_graph(n, m, config.seed + i)));
    }
    SplitMix64 rng(config.seed);
    std::vector<BenchGraphResult> results;
    out << "n,m,method,ms,failures,max_rel_diff\n";
    for (const auto& g : graphs) {
        auto r = bench_graph(g, config.trials, config.eps, rng);
        for (const BenchCell* cell : {&r.inverse_power, &r.lanczos}) {
            out << cell->n << ',' << cell->m << ',' << to_string(cell->solver) << ',' << format_double(cell->mean_ms)
                << ',' << cell->failures << ',' << format_double(r.max_rel_diff) << '\n';
        }
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace grounded::cli
