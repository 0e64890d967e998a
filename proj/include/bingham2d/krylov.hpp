#pragma once

#include <functional>

#include "bingham2d/grid.hpp"
#include "bingham2d/operators.hpp"

namespace bingham2d {

struct KrylovResult {
    int iters = 0;
    double rel_residual = 0.0;
    bool converged = false;
};

using VelocityOp = std::function<void(const VelocityField&, VelocityField&)>;

// Preconditioned conjugate gradients for an operator that is symmetric
// positive definite in the (.,.)_h inner product.  diag holds the Jacobi
// scaling (entries 1 where the unknown is pinned to zero).
KrylovResult solve_cg(const Grid& g, const VelocityOp& op, const VelocityField& rhs,
                      VelocityField& x, const VelocityField& diag,
                      double rel_tol, int max_iter);

// BiCGStab for positive-definite but nonsymmetric operators (mass +
// diffusion + frozen skew advection), same Jacobi scaling.
KrylovResult solve_bicgstab(const Grid& g, const VelocityOp& op, const VelocityField& rhs,
                            VelocityField& x, const VelocityField& diag,
                            double rel_tol, int max_iter);

// Diagonal of sigma*I + gradient_adjoint(a .* velocity_gradient(.)) in the
// face basis; boundary-normal entries are set to 1.
VelocityField weighted_laplacian_diagonal(const Grid& g, const ScalarCellField& a, double sigma);

}  // namespace bingham2d
