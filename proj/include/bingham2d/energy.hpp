#pragma once

#include "bingham2d/grid.hpp"
#include "bingham2d/operators.hpp"

namespace bingham2d {

struct PhysicsParams {
    double nu = 1.0;       // viscosity
    double epsilon = 1e-3; // regularization of the gradient magnitude

    PhysicsParams() = default;
    PhysicsParams(double nu_, double epsilon_) : nu(nu_), epsilon(epsilon_) {
        if (!(nu > 0.0))
            throw std::invalid_argument("PhysicsParams: nu must be positive");
        if (!(epsilon > 0.0) || epsilon > 1.0)
            throw std::invalid_argument("PhysicsParams: epsilon must lie in (0, 1]");
    }
};

// Nonnegative yield-stress field at cell centers.
class YieldField {
  public:
    YieldField() = default;
    explicit YieldField(ScalarCellField values);

    const ScalarCellField& values() const { return values_; }
    // Largest value on cells adjacent to the boundary; zero when the field
    // has a vanishing boundary trace.
    double boundary_max() const;

  private:
    ScalarCellField values_;
};

// J(u) = sum_c hx*hy * [ nu/2 |G_c|^2 + g_c sqrt(|G_c|^2 + eps^2) ],
// G = velocity_gradient(u).  Strictly convex in u on slip-normal fields
// modulo constants; smooth for eps > 0.
double regularized_energy(const Grid& g, const PhysicsParams& params,
                          const YieldField& yield, const VelocityField& u);

// Riesz representative of dJ(u) in the discrete velocity inner product:
// (energy_gradient(u), v)_h = d/ds J(u + s v)|_{s=0} for slip-normal v.
// Computed as gradient_adjoint(a .* G) with a the effective viscosity, so
// the identity is exact in floating point up to rounding.
VelocityField energy_gradient(const Grid& g, const PhysicsParams& params,
                              const YieldField& yield, const VelocityField& u);

// a_c = nu + g_c / sqrt(|G_c|^2 + eps^2); the weight of the linearized
// elliptic operator frozen by the Picard iteration.
ScalarCellField effective_viscosity(const Grid& g, const PhysicsParams& params,
                                    const YieldField& yield, const VelocityField& u);
ScalarCellField effective_viscosity_from_gradient(const PhysicsParams& params,
                                                  const YieldField& yield,
                                                  const TensorCellField& grad);

// lambda_c = G_c / sqrt(|G_c|^2 + eps^2); satisfies |lambda_c| <= 1 and
// lambda : G = |G|^2 / sqrt(|G|^2 + eps^2).
TensorCellField dual_multiplier(const Grid& g, const PhysicsParams& params,
                                const VelocityField& u);

}  // namespace bingham2d
