#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "grounded/errors.hpp"
#include "grounded/graph.hpp"

namespace grounded {

/// Matrix-free grounded Laplacian L(S): the principal submatrix of D - A
/// with the rows and columns of S removed.
///
/// Free nodes V\S are indexed 0..dim-1 in ascending node-id order. The
/// operator keeps a pointer to the graph; the graph must outlive it.
class GroundedOperator {
public:
    GroundedOperator(const Graph& graph, NodeSet grounded)
        : graph_(&graph), grounded_(std::move(grounded)) {
        if (grounded_.universe() != graph.num_nodes()) {
            throw std::invalid_argument("grounded set universe does not match graph");
        }
        if (grounded_.empty()) throw GuardError("grounded set must be nonempty");
        if (grounded_.size() >= graph.num_nodes()) throw GuardError("cannot ground every node");

        constexpr auto absent = static_cast<std::uint32_t>(-1);
        local_.assign(graph.num_nodes(), absent);
        free_.reserve(graph.num_nodes() - grounded_.size());
        diagonal_.resize(static_cast<Eigen::Index>(graph.num_nodes() - grounded_.size()));
        for (NodeId v = 0; v < graph.num_nodes(); ++v) {
            if (grounded_.contains(v)) continue;
            local_[v] = static_cast<std::uint32_t>(free_.size());
            diagonal_[static_cast<Eigen::Index>(free_.size())] = static_cast<double>(graph.degree(v));
            free_.push_back(v);
        }
    }

    std::size_t dimension() const noexcept { return free_.size(); }
    const Graph& graph() const noexcept { return *graph_; }
    const NodeSet& grounded() const noexcept { return grounded_; }

    /// Node id of local index i.
    NodeId node(std::size_t local) const { return free_.at(local); }
    std::span<const NodeId> free_nodes() const noexcept { return free_; }
    /// Local index of node v, or -1 when v is grounded.
    std::ptrdiff_t local_index(NodeId v) const {
        auto l = local_.at(v);
        return l == static_cast<std::uint32_t>(-1) ? -1 : static_cast<std::ptrdiff_t>(l);
    }

    /// Diagonal of L(S): the full-graph degrees of the free nodes.
    const Eigen::VectorXd& diagonal() const noexcept { return diagonal_; }

    /// y = L(S) x.
    void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
        check_dimension(x);
        y.resize(x.size());
        constexpr auto absent = static_cast<std::uint32_t>(-1);
        for (std::size_t i = 0; i < free_.size(); ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            double acc = diagonal_[ii] * x[ii];
            for (NodeId w : graph_->neighbors(free_[i])) {
                auto l = local_[w];
                if (l != absent) acc -= x[static_cast<Eigen::Index>(l)];
            }
            y[ii] = acc;
        }
    }

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
        Eigen::VectorXd y;
        apply(x, y);
        return y;
    }

    /// Dense copy of L(S); for verification only.
    Eigen::MatrixXd to_dense() const {
        const auto d = static_cast<Eigen::Index>(dimension());
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
        constexpr auto absent = static_cast<std::uint32_t>(-1);
        for (std::size_t i = 0; i < free_.size(); ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            m(ii, ii) = diagonal_[ii];
            for (NodeId w : graph_->neighbors(free_[i])) {
                auto l = local_[w];
                if (l != absent) m(ii, static_cast<Eigen::Index>(l)) = -1.0;
            }
        }
        return m;
    }

    void check_dimension(const Eigen::VectorXd& x) const {
        if (static_cast<std::size_t>(x.size()) != dimension()) {
            throw std::invalid_argument("vector dimension " + std::to_string(x.size()) +
                                        " does not match operator dimension " + std::to_string(dimension()));
        }
    }

private:
    const Graph* graph_;
    NodeSet grounded_;
    std::vector<NodeId> free_;
    std::vector<std::uint32_t> local_;
    Eigen::VectorXd diagonal_;
};

}  // namespace grounded
