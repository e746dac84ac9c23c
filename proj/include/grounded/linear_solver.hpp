#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <optional>

#include "grounded/errors.hpp"
#include "grounded/grounded_operator.hpp"

namespace grounded {

struct SolveResult {
    Eigen::VectorXd x;
    std::size_t iterations = 0;
    /// ||L(S) x - b||_2 / ||b||_2 at exit.
    double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients on L(S) x = b.
///
/// Stops once ||L(S) x - b||_2 <= delta ||b||_2. The iteration cap defaults
/// to 10 * dim matrix-vector products; hitting it throws ConvergenceError.
inline SolveResult solve(const GroundedOperator& op, const Eigen::VectorXd& b, double delta,
                         std::optional<std::size_t> max_iterations = std::nullopt) {
    op.check_dimension(b);
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("solver tolerance must lie in (0, 1)");
    const std::size_t cap = max_iterations.value_or(10 * op.dimension());

    SolveResult out;
    out.x = Eigen::VectorXd::Zero(b.size());
    const double b_norm = b.norm();
    if (!std::isfinite(b_norm)) throw NumericalError("solve: right-hand side is not finite");
    if (b_norm == 0.0) return out;

    const Eigen::VectorXd inv_diag = op.diagonal().cwiseInverse();
    Eigen::VectorXd r = b;
    Eigen::VectorXd z = inv_diag.cwiseProduct(r);
    Eigen::VectorXd p = z;
    Eigen::VectorXd q(b.size());
    double rz = r.dot(z);
    double r_norm = b_norm;

    while (r_norm > delta * b_norm) {
        if (out.iterations >= cap) {
            throw ConvergenceError("conjugate gradient hit its iteration cap", r_norm / b_norm);
        }
        op.apply(p, q);
        const double pq = p.dot(q);
        if (!(pq > 0.0) || !std::isfinite(pq)) {
            throw NumericalError("conjugate gradient lost positive definiteness");
        }
        const double alpha = rz / pq;
        out.x.noalias() += alpha * p;
        r.noalias() -= alpha * q;
        r_norm = r.norm();
        z = inv_diag.cwiseProduct(r);
        const double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
        ++out.iterations;
    }
    out.relative_residual = r_norm / b_norm;
    return out;
}

}  // namespace grounded
