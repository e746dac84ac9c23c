#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "grounded/errors.hpp"

namespace grounded {

using NodeId = std::uint32_t;
using Label = std::int64_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable undirected simple graph in compressed-row form.
///
/// Internal ids are dense in [0, n). Each node also carries the external
/// label it had in the input file; generated graphs use label = id.
class Graph {
public:
    Graph() = default;

    /// Builds a graph over nodes [0, n). Self-loops are dropped and duplicate
    /// edges (in either orientation) collapsed. An empty `labels` means
    /// label(i) = i.
    static Graph from_edges(std::size_t n, std::span<const Edge> edges, std::vector<Label> labels = {}) {
        if (!labels.empty() && labels.size() != n) {
            throw std::invalid_argument("label count does not match node count");
        }
        Graph g;
        g.offsets_.assign(n + 1, 0);
        for (auto [u, v] : edges) {
            if (u >= n || v >= n) throw std::out_of_range("edge endpoint out of range");
            if (u == v) continue;
            ++g.offsets_[u + 1];
            ++g.offsets_[v + 1];
        }
        std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
        std::vector<NodeId> adj(g.offsets_.back());
        std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
        for (auto [u, v] : edges) {
            if (u == v) continue;
            adj[fill[u]++] = v;
            adj[fill[v]++] = u;
        }
        // Sort and dedupe each row, compacting in place.
        std::size_t write = 0;
        std::vector<std::size_t> new_offsets(n + 1, 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto first = adj.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]);
            auto last = adj.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]);
            std::sort(first, last);
            last = std::unique(first, last);
            for (auto it = first; it != last; ++it) adj[write++] = *it;
            new_offsets[i + 1] = write;
        }
        adj.resize(write);
        g.adjacency_ = std::move(adj);
        g.offsets_ = std::move(new_offsets);

        if (labels.empty()) {
            labels.resize(n);
            std::iota(labels.begin(), labels.end(), Label{0});
        }
        g.labels_ = std::move(labels);
        g.index_.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!g.index_.emplace(g.labels_[i], static_cast<NodeId>(i)).second) {
                throw std::invalid_argument("duplicate external label " + std::to_string(g.labels_[i]));
            }
        }
        g.connected_ = g.count_components() <= 1;
        return g;
    }

    std::size_t num_nodes() const noexcept { return labels_.size(); }
    std::size_t num_edges() const noexcept { return adjacency_.size() / 2; }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }
    std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

    std::size_t max_degree() const noexcept {
        std::size_t best = 0;
        for (std::size_t v = 0; v < num_nodes(); ++v) best = std::max(best, degree(static_cast<NodeId>(v)));
        return best;
    }

    bool has_edge(NodeId u, NodeId v) const {
        auto row = neighbors(u);
        return std::binary_search(row.begin(), row.end(), v);
    }

    Label label(NodeId v) const { return labels_.at(v); }
    std::span<const Label> labels() const noexcept { return labels_; }
    std::optional<NodeId> find_label(Label label) const {
        auto it = index_.find(label);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool is_connected() const noexcept { return connected_; }

    /// Each undirected edge once, as (u, v) with u < v, in row order.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(num_edges());
        for (NodeId u = 0; u < num_nodes(); ++u) {
            for (NodeId v : neighbors(u)) {
                if (u < v) out.emplace_back(u, v);
            }
        }
        return out;
    }

    /// Component id per node; components numbered in order of their smallest node.
    std::vector<std::uint32_t> component_ids() const {
        constexpr auto unset = static_cast<std::uint32_t>(-1);
        std::vector<std::uint32_t> comp(num_nodes(), unset);
        std::vector<NodeId> stack;
        std::uint32_t next = 0;
        for (NodeId s = 0; s < num_nodes(); ++s) {
            if (comp[s] != unset) continue;
            comp[s] = next;
            stack.push_back(s);
            while (!stack.empty()) {
                NodeId u = stack.back();
                stack.pop_back();
                for (NodeId v : neighbors(u)) {
                    if (comp[v] == unset) {
                        comp[v] = next;
                        stack.push_back(v);
                    }
                }
            }
            ++next;
        }
        return comp;
    }

private:
    std::size_t count_components() const {
        auto comp = component_ids();
        return comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    }

    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> adjacency_;
    std::vector<Label> labels_;
    std::unordered_map<Label, NodeId> index_;
    bool connected_ = true;
};

/// Ordered set of internal node ids with O(1) membership, used for the
/// grounded set. Insertion order is preserved.
class NodeSet {
public:
    NodeSet() = default;
    explicit NodeSet(std::size_t universe) : member_(universe, 0) {}
    NodeSet(std::size_t universe, std::initializer_list<NodeId> ids) : NodeSet(universe) {
        for (NodeId id : ids) insert(id);
    }
    template <class Range>
    static NodeSet of(std::size_t universe, const Range& ids) {
        NodeSet s(universe);
        for (auto id : ids) s.insert(static_cast<NodeId>(id));
        return s;
    }

    void insert(NodeId id) {
        if (id >= member_.size()) {
            throw std::out_of_range("node id " + std::to_string(id) + " out of range");
        }
        if (member_[id]) throw std::invalid_argument("node id " + std::to_string(id) + " already in set");
        member_[id] = 1;
        order_.push_back(id);
    }

    bool contains(NodeId id) const { return id < member_.size() && member_[id]; }
    std::size_t size() const noexcept { return order_.size(); }
    bool empty() const noexcept { return order_.empty(); }
    std::size_t universe() const noexcept { return member_.size(); }
    std::span<const NodeId> members() const noexcept { return order_; }

    NodeSet with(NodeId id) const {
        NodeSet copy = *this;
        copy.insert(id);
        return copy;
    }

private:
    std::vector<char> member_;
    std::vector<NodeId> order_;
};

struct ParseOptions {
    std::vector<std::string> comment_prefixes{"#", "%"};
    /// Accept (and ignore) columns after the two endpoints, e.g. KONECT weights
    /// and timestamps. When false, extra columns are a parse error.
    bool weighted_tolerance = true;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n\v\f";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != ',') ++j;
        if (j > i) tokens.push_back(s.substr(i, j - i));
        i = j;
    }
    return tokens;
}

inline Label parse_label(std::string_view tok, std::size_t line) {
    Label value{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError("expected integer node label, got '" + std::string(tok) + "'", line);
    }
    return value;
}

inline void check_number(std::string_view tok, std::size_t line) {
    double value{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError("expected numeric column, got '" + std::string(tok) + "'", line);
    }
}

}  // namespace detail

/// Reads a whitespace-separated edge list "u v [w ...]" with integer labels.
/// External labels are mapped to dense internal ids in order of first appearance.
inline Graph parse_edge_list(std::istream& in, const ParseOptions& options = {}) {
    std::unordered_map<Label, NodeId> ids;
    std::vector<Label> labels;
    std::vector<Edge> edges;
    auto intern = [&](Label l) {
        auto [it, inserted] = ids.emplace(l, static_cast<NodeId>(labels.size()));
        if (inserted) labels.push_back(l);
        return it->second;
    };

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto line = detail::trim(raw);
        if (line.empty()) continue;
        bool comment = false;
        for (const auto& prefix : options.comment_prefixes) {
            if (!prefix.empty() && line.starts_with(prefix)) {
                comment = true;
                break;
            }
        }
        if (comment) continue;

        auto tokens = detail::split_ws(line);
        if (tokens.size() < 2) throw ParseError("expected at least two columns", line_no);
        if (tokens.size() > 2) {
            if (!options.weighted_tolerance) throw ParseError("unexpected extra columns", line_no);
            for (std::size_t t = 2; t < tokens.size(); ++t) detail::check_number(tokens[t], line_no);
        }
        Label a = detail::parse_label(tokens[0], line_no);
        Label b = detail::parse_label(tokens[1], line_no);
        NodeId u = intern(a);
        NodeId v = intern(b);
        edges.emplace_back(u, v);
    }

    const std::size_t n = labels.size();
    Graph g = Graph::from_edges(n, edges, std::move(labels));
    if (g.num_edges() == 0) throw ParseError("edge list contains no edges");
    return g;
}

/// Node-induced subgraph on `keep` (must be sorted ascending). Labels carry over.
inline Graph induced_subgraph(const Graph& g, std::span<const NodeId> keep) {
    constexpr auto absent = static_cast<NodeId>(-1);
    std::vector<NodeId> remap(g.num_nodes(), absent);
    std::vector<Label> labels;
    labels.reserve(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        remap[keep[i]] = static_cast<NodeId>(i);
        labels.push_back(g.label(keep[i]));
    }
    std::vector<Edge> edges;
    for (NodeId u : keep) {
        for (NodeId v : g.neighbors(u)) {
            if (u < v && remap[v] != absent) edges.emplace_back(remap[u], remap[v]);
        }
    }
    const std::size_t n = keep.size();
    return Graph::from_edges(n, edges, std::move(labels));
}

/// Largest connected component, relabeled densely in ascending order of the
/// original ids. Ties go to the component holding the smallest id.
inline Graph largest_connected_component(const Graph& g) {
    if (g.is_connected()) return g;
    auto comp = g.component_ids();
    std::vector<std::size_t> sizes(*std::max_element(comp.begin(), comp.end()) + 1, 0);
    for (auto c : comp) ++sizes[c];
    // Components are numbered by smallest member, so the first maximum wins ties.
    auto best = static_cast<std::uint32_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    std::vector<NodeId> keep;
    keep.reserve(sizes[best]);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (comp[v] == best) keep.push_back(v);
    }
    return induced_subgraph(g, keep);
}

/// True iff every edge has at least one endpoint in `s`.
inline bool is_vertex_cover(const Graph& g, const NodeSet& s) {
    if (s.universe() != g.num_nodes()) throw std::out_of_range("node set universe does not match graph");
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
        if (s.contains(u)) continue;
        for (NodeId v : g.neighbors(u)) {
            if (!s.contains(v)) return false;
        }
    }
    return true;
}

/// Writes "external,internal" rows with a header line.
inline void write_label_map_csv(const Graph& g, std::ostream& out) {
    out << "external,internal\n";
    for (NodeId v = 0; v < g.num_nodes(); ++v) out << g.label(v) << ',' << v << '\n';
}

}  // namespace grounded
