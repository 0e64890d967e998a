#pragma once

#include <random>

#include "bingham2d/grid.hpp"

namespace bingham2d {

// ---- field algebra ---------------------------------------------------------

void fill(VelocityField& u, double value);
void fill(ScalarCellField& p, double value);
VelocityField axpy(double alpha, const VelocityField& x, const VelocityField& y);  // alpha*x + y
void axpy_inplace(double alpha, const VelocityField& x, VelocityField& y);         // y += alpha*x
void scale_inplace(VelocityField& x, double alpha);
ScalarCellField axpy(double alpha, const ScalarCellField& x, const ScalarCellField& y);
void axpy_inplace(double alpha, const ScalarCellField& x, ScalarCellField& y);
void scale_inplace(ScalarCellField& x, double alpha);

template <class F1, class F2>
VelocityField sample_velocity(const Grid& g, F1&& f1, F2&& f2) {
    VelocityField u(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
            u.u1_at(i, j) = f1(g.xface(i), g.yc(j));
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            u.u2_at(i, j) = f2(g.xc(i), g.yface(j));
    u.enforce_slip();
    return u;
}

template <class F>
ScalarCellField sample_cells(const Grid& g, F&& f) {
    ScalarCellField p(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            p.at(i, j) = f(g.xc(i), g.yc(j));
    return p;
}

// ---- inner products and norms ---------------------------------------------

double dot(const Grid& g, const VelocityField& u, const VelocityField& v);
double dot(const Grid& g, const ScalarCellField& p, const ScalarCellField& q);
double dot(const Grid& g, const TensorCellField& s, const TensorCellField& t);

double l2_norm(const Grid& g, const VelocityField& u);
double l2_norm(const Grid& g, const ScalarCellField& p);
double l1_norm(const Grid& g, const ScalarCellField& p);
double linf_norm(const VelocityField& u);
double linf_norm(const ScalarCellField& p);
double mean(const Grid& g, const ScalarCellField& p);

double h1_seminorm(const Grid& g, const VelocityField& u);
double h2_seminorm(const Grid& g, const VelocityField& u);
// Full discrete H1 norm: sqrt(l2^2 + h1_semi^2).
double v_norm(const Grid& g, const VelocityField& u);

// (w, |grad u|)_h with w >= 0 required.
double weighted_gradient_l1(const Grid& g, const ScalarCellField& w, const VelocityField& u);

// ---- difference operators --------------------------------------------------

// Per-cell 2x2 gradient tensor.  Diagonal entries difference the adjacent
// faces directly; off-diagonal (tangential) entries difference the
// face-averaged center values with mirror ghosts at the walls, which
// encodes d(u_tau)/dn = 0 on the slip boundary.
TensorCellField velocity_gradient(const Grid& g, const VelocityField& u);

// Adjoint of velocity_gradient between the discrete inner products:
// (gradient_adjoint(S), v)_h = (S, velocity_gradient(v))_h for every
// slip-normal v.  Wall-normal entries of the result are exact zeros.
VelocityField gradient_adjoint(const Grid& g, const TensorCellField& s);

// Per-cell divergence (the trace of velocity_gradient).
ScalarCellField divergence(const Grid& g, const VelocityField& u);

// Face gradient of a cell scalar; wall-normal entries are exact zeros, so
// (divergence(u), p)_h = -(u, pressure_gradient(p))_h holds exactly for
// slip-normal u.
VelocityField pressure_gradient(const Grid& g, const ScalarCellField& p);

// Frobenius norm per cell of a tensor field.
ScalarCellField tensor_magnitude(const TensorCellField& s);

// Face values averaged to cell centers, and the adjoint map back to faces:
// (average_adjoint(m1, m2), v)_h = hx*hy * sum_c (m1*v1c + m2*v2c).
void average_to_centers(const Grid& g, const VelocityField& u,
                        ScalarCellField& u1c, ScalarCellField& u2c);
VelocityField average_adjoint(const Grid& g, const ScalarCellField& m1, const ScalarCellField& m2);

// ---- cell Poisson and Leray projection -------------------------------------

// Solves -div(pressure_gradient(phi)) = rhs by conjugate gradients on the
// zero-mean subspace.  Returns the iteration count.
int solve_cell_poisson(const Grid& g, const ScalarCellField& rhs, ScalarCellField& phi,
                       double rel_tol, int max_iter);

// Discrete Leray projection: removes pressure_gradient(phi) so that the
// result is divergence-free to rel_tol.
VelocityField leray_project(const Grid& g, const VelocityField& u,
                            double rel_tol = 1e-12, int max_iter = 20000);

// Smoothed random slip-normal field, unit v_norm (used by audits and tests).
VelocityField random_slip_field(const Grid& g, std::mt19937& rng, int smooth_passes = 2);

}  // namespace bingham2d
