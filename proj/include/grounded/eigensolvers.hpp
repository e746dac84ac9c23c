#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "grounded/errors.hpp"
#include "grounded/grounded_operator.hpp"
#include "grounded/linear_solver.hpp"
#include "grounded/rng.hpp"

namespace grounded {

/// Smallest eigenvalue of L(S) and its unit eigenvector, indexed like the
/// operator's free nodes and oriented to be nonnegative.
struct EigenPair {
    double lambda = 0.0;
    Eigen::VectorXd u;
    /// ||L(S) u - lambda u||_2
    double residual = 0.0;
    std::size_t iterations = 0;
};

enum class EigenSolverKind { inverse_power, lanczos };

inline std::string_view to_string(EigenSolverKind kind) {
    return kind == EigenSolverKind::lanczos ? "lanczos" : "inverse_power";
}

namespace detail {

/// Makes the largest-magnitude entry positive, then zeroes tiny negative noise.
inline void orient_nonnegative(Eigen::VectorXd& u) {
    if (u.size() == 0) return;
    Eigen::Index arg = 0;
    u.cwiseAbs().maxCoeff(&arg);
    if (u[arg] < 0.0) u = -u;
    for (auto& x : u) {
        if (x < 0.0 && x >= -1e-12) x = 0.0;
    }
}

inline void check_finite(const Eigen::VectorXd& v, const char* where) {
    if (!v.allFinite()) throw NumericalError(std::string(where) + ": non-finite values");
}

/// Orients u and, if entries are still negative, replaces it by |u|, which
/// can only lower the Rayleigh quotient of L(S). lambda is the quotient.
inline EigenPair finish_pair(const GroundedOperator& op, Eigen::VectorXd u, std::size_t iterations) {
    orient_nonnegative(u);
    if (u.size() > 0 && u.minCoeff() < 0.0) {
        u = u.cwiseAbs();
        u /= u.norm();
    }
    const Eigen::VectorXd mu = op.apply(u);
    EigenPair pair;
    pair.lambda = u.dot(mu);
    pair.residual = (mu - pair.lambda * u).norm();
    pair.u = std::move(u);
    pair.iterations = iterations;
    return pair;
}

/// Inverse power iteration driven by the linear solver.
///
/// Starts from the normalized all-ones vector; each pass solves L(S) v = u to
/// relative residual eps and renormalizes, stopping when the relative change
/// of the Rayleigh quotient drops to eps. The solver and the stopping rule
/// share the single tolerance eps.
///
/// Each pass also takes the smallest Ritz pair of span{u, v}. When the two
/// lowest eigenvalues nearly coincide the plain iterate settles close to the
/// second eigenvector first and then drifts toward the first so slowly that
/// the stopping rule fires early; the two-vector span holds both directions.
inline EigenPair inverse_power_block(const GroundedOperator& op, double eps, std::size_t max_outer) {
    const auto dim = static_cast<Eigen::Index>(op.dimension());
    Eigen::VectorXd u = Eigen::VectorXd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    Eigen::VectorXd mu = op.apply(u);
    double rq_u = u.dot(mu);
    Eigen::VectorXd v(dim), mv(dim);

    for (std::size_t iter = 1; iter <= max_outer; ++iter) {
        SolveResult solved = solve(op, u, eps);
        v = std::move(solved.x);
        const double norm = v.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalError("inverse power: degenerate iterate");
        v /= norm;
        detail::check_finite(v, "inverse power");
        op.apply(v, mv);
        double rq_v = v.dot(mv);

        // Rayleigh-Ritz on span{v, w}, w the part of u orthogonal to v.
        Eigen::VectorXd w = u - v.dot(u) * v;
        Eigen::VectorXd mw = mu - v.dot(u) * mv;
        const double w_norm = w.norm();
        if (w_norm > 1e-8) {
            w /= w_norm;
            mw /= w_norm;
            const double vw = v.dot(mw), ww = w.dot(mw);
            Eigen::Matrix2d h;
            h << rq_v, vw, vw, ww;
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> small(h);
            const Eigen::Vector2d c = small.eigenvectors().col(0);
            if (small.eigenvalues()[0] < rq_v) {
                // |x|' L |x| <= x' L x since L(S) has no positive off-diagonal
                // entry, so the absolute value keeps the Perron sign.
                v = (c[0] * v + c[1] * w).cwiseAbs();
                v /= v.norm();
                op.apply(v, mv);
                rq_v = v.dot(mv);
            }
        }

        const double omega = std::abs(rq_u - rq_v) / rq_v;
        if (omega <= eps) return detail::finish_pair(op, std::move(v), iter);
        std::swap(u, v);
        std::swap(mu, mv);
        rq_u = rq_v;
    }
    throw ConvergenceError("inverse power hit its outer iteration cap", (mu - rq_u * u).norm());
}

/// Lanczos tridiagonalization with full reorthogonalization, extracting the
/// smallest Ritz pair. Converged when the Ritz value changes by at most eps
/// (relative) between steps and the residual bound beta_j |s_j| is at most
/// eps * theta. On breakdown the Krylov basis is extended with a fresh
/// pseudo-random direction orthogonal to it.
inline EigenPair lanczos_block(const GroundedOperator& op, double eps, std::size_t max_steps) {
    const std::size_t dim = op.dimension();
    const auto n = static_cast<Eigen::Index>(dim);
    const std::size_t steps_cap = std::min(max_steps, dim);

    std::vector<Eigen::VectorXd> basis;
    std::vector<double> alpha, beta;
    basis.reserve(std::min<std::size_t>(steps_cap, 512));

    auto orthogonalize = [&](Eigen::VectorXd& w) {
        // Two passes of classical Gram-Schmidt.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : basis) w.noalias() -= q.dot(w) * q;
        }
    };

    SplitMix64 rng(0x5eed1a2c05ULL);
    Eigen::VectorXd q = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(dim)));
    Eigen::VectorXd w(n);
    const double scale = op.diagonal().maxCoeff() * 2.0;
    double theta_prev = std::numeric_limits<double>::quiet_NaN();
    double last_bound = std::numeric_limits<double>::infinity();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    for (std::size_t j = 0; j < steps_cap; ++j) {
        basis.push_back(q);
        op.apply(q, w);
        const double a = q.dot(w);
        alpha.push_back(a);
        orthogonalize(w);
        double b = w.norm();
        detail::check_finite(w, "lanczos");

        const auto m = static_cast<Eigen::Index>(alpha.size());
        Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
        Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1))
                                    : Eigen::VectorXd();
        tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        if (tri.info() != Eigen::Success) throw NumericalError("lanczos: tridiagonal eigensolve failed");
        const double theta = tri.eigenvalues()[0];
        const Eigen::VectorXd s = tri.eigenvectors().col(0);

        const bool breakdown = b <= 1e-12 * scale;
        last_bound = breakdown ? 0.0 : b * std::abs(s[m - 1]);
        const bool exhausted = basis.size() == dim;
        const bool stable = std::isfinite(theta_prev) && std::abs(theta - theta_prev) <= eps * theta;
        if (exhausted || (stable && last_bound <= eps * theta)) {
            Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
            for (Eigen::Index i = 0; i < m; ++i) u.noalias() += s[i] * basis[static_cast<std::size_t>(i)];
            u.normalize();
            return detail::finish_pair(op, std::move(u), basis.size());
        }
        theta_prev = theta;

        if (breakdown) {
            // Invariant subspace reached; continue from a new direction.
            for (auto& x : w) x = rng.uniform() - 0.5;
            orthogonalize(w);
            b = w.norm();
            if (!(b > 1e-12)) throw NumericalError("lanczos: could not extend Krylov basis");
            q = w / b;
            beta.push_back(0.0);
        } else {
            q = w / b;
            beta.push_back(b);
        }
    }
    throw ConvergenceError("lanczos hit its step cap", last_bound);
}

/// Local indices of the connected components of the free subgraph, each
/// ascending, ordered by their smallest index.
inline std::vector<std::vector<Eigen::Index>> free_components(const GroundedOperator& op) {
    const std::size_t dim = op.dimension();
    std::vector<std::uint32_t> comp(dim, static_cast<std::uint32_t>(-1));
    std::vector<std::vector<Eigen::Index>> out;
    std::vector<std::size_t> queue;
    for (std::size_t start = 0; start < dim; ++start) {
        if (comp[start] != static_cast<std::uint32_t>(-1)) continue;
        const auto id = static_cast<std::uint32_t>(out.size());
        out.emplace_back();
        queue.assign(1, start);
        comp[start] = id;
        for (std::size_t h = 0; h < queue.size(); ++h) {
            out.back().push_back(static_cast<Eigen::Index>(queue[h]));
            for (NodeId w : op.graph().neighbors(op.node(queue[h]))) {
                const auto l = op.local_index(w);
                if (l < 0 || comp[static_cast<std::size_t>(l)] != static_cast<std::uint32_t>(-1)) continue;
                comp[static_cast<std::size_t>(l)] = id;
                queue.push_back(static_cast<std::size_t>(l));
            }
        }
        std::sort(out.back().begin(), out.back().end());
    }
    return out;
}

/// Blocks at most this large are solved densely when L(S) splits.
inline constexpr std::size_t dense_block_size = 64;

/// L(S) is block diagonal over the components of the free subgraph, and its
/// smallest eigenvalue is the smallest block eigenvalue. Solving blocks apart
/// avoids the slow drift between blocks with nearly equal eigenvalues.
template <class BlockSolver>
EigenPair over_blocks(const GroundedOperator& op, BlockSolver&& solve_block) {
    const auto comps = free_components(op);
    if (comps.size() <= 1) return solve_block(op);

    const Graph& g = op.graph();
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_u;
    const std::vector<Eigen::Index>* best_comp = nullptr;
    std::size_t iterations = 0;
    for (const auto& c : comps) {
        double lambda;
        Eigen::VectorXd u;
        if (c.size() <= dense_block_size) {
            const auto b = static_cast<Eigen::Index>(c.size());
            Eigen::MatrixXd m = Eigen::MatrixXd::Zero(b, b);
            for (Eigen::Index i = 0; i < b; ++i) {
                m(i, i) = op.diagonal()[c[i]];
                for (NodeId w : g.neighbors(op.node(static_cast<std::size_t>(c[i])))) {
                    const auto l = op.local_index(w);
                    if (l < 0) continue;
                    const auto j = std::lower_bound(c.begin(), c.end(), l) - c.begin();
                    m(i, j) = -1.0;
                }
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
            if (es.info() != Eigen::Success) throw NumericalError("dense block eigensolver failed");
            lambda = es.eigenvalues()[0];
            u = es.eigenvectors().col(0).cwiseAbs();
        } else {
            // Grounding everything outside the block leaves exactly the block.
            NodeSet rest(g.num_nodes());
            std::size_t next = 0;
            for (NodeId v = 0; v < g.num_nodes(); ++v) {
                const auto l = op.local_index(v);
                if (next < c.size() && l == c[next]) {
                    ++next;
                    continue;
                }
                rest.insert(v);
            }
            EigenPair pair = solve_block(GroundedOperator(g, std::move(rest)));
            iterations += pair.iterations;
            lambda = pair.lambda;
            u = std::move(pair.u);
        }
        if (lambda < best) {
            best = lambda;
            best_u = std::move(u);
            best_comp = &c;
        }
    }
    Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(op.dimension()));
    for (std::size_t i = 0; i < best_comp->size(); ++i) full[(*best_comp)[i]] = best_u[static_cast<Eigen::Index>(i)];
    return finish_pair(op, std::move(full), iterations);
}

}  // namespace detail

/// Smallest eigenpair by inverse power iteration (see detail::inverse_power_block),
/// one connected block of L(S) at a time.
inline EigenPair smallest_eigenpair(const GroundedOperator& op, double eps = 1e-3, std::size_t max_outer = 500) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
    return detail::over_blocks(
        op, [&](const GroundedOperator& block) { return detail::inverse_power_block(block, eps, max_outer); });
}

/// Smallest eigenpair by Lanczos (see detail::lanczos_block), one connected
/// block of L(S) at a time.
inline EigenPair smallest_eigenpair_lanczos(const GroundedOperator& op, double eps = 1e-3,
                                            std::size_t max_steps = 5000) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
    return detail::over_blocks(
        op, [&](const GroundedOperator& block) { return detail::lanczos_block(block, eps, max_steps); });
}

inline EigenPair smallest_eigenpair(const GroundedOperator& op, double eps, EigenSolverKind kind) {
    return kind == EigenSolverKind::lanczos ? smallest_eigenpair_lanczos(op, eps) : smallest_eigenpair(op, eps);
}

inline constexpr std::size_t dense_oracle_cap = 2000;

/// Exact smallest pair from a full dense symmetric eigendecomposition.
inline EigenPair dense_oracle(const GroundedOperator& op) {
    if (op.dimension() > dense_oracle_cap) {
        throw GuardError("dense oracle limited to " + std::to_string(dense_oracle_cap) + " free nodes");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.to_dense());
    if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
    // The lambda_min eigenspace of an SDDM matrix is spanned by nonnegative
    // vectors with disjoint supports, so the entrywise modulus stays in it.
    Eigen::VectorXd u = es.eigenvectors().col(0).cwiseAbs();
    auto pair = detail::finish_pair(op, std::move(u), 0);
    pair.lambda = es.eigenvalues()[0];
    return pair;
}

/// Smallest eigenvalue only, from the dense decomposition.
inline double dense_lambda(const GroundedOperator& op) {
    if (op.dimension() > dense_oracle_cap) {
        throw GuardError("dense oracle limited to " + std::to_string(dense_oracle_cap) + " free nodes");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.to_dense(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
    return es.eigenvalues()[0];
}

}  // namespace grounded
