#include "bingham2d/energy.hpp"

#include <cmath>

namespace bingham2d {

YieldField::YieldField(ScalarCellField values) : values_(std::move(values)) {
    for (double x : values_.v)
        if (!(x >= 0.0))
            throw std::invalid_argument("YieldField: values must be nonnegative and finite");
}

double YieldField::boundary_max() const {
    const int nx = values_.nx, ny = values_.ny;
    double m = 0.0;
    for (int i = 0; i < nx; ++i) {
        m = std::max(m, values_.at(i, 0));
        m = std::max(m, values_.at(i, ny - 1));
    }
    for (int j = 0; j < ny; ++j) {
        m = std::max(m, values_.at(0, j));
        m = std::max(m, values_.at(nx - 1, j));
    }
    return m;
}

double regularized_energy(const Grid& g, const PhysicsParams& params,
                          const YieldField& yield, const VelocityField& u) {
    require_same_shape(g, yield.values(), "regularized_energy");
    TensorCellField t = velocity_gradient(g, u);
    const double e2 = params.epsilon * params.epsilon;
    double s = 0.0;
    for (size_t k = 0; k < t.cells(); ++k) {
        const double m2 = t.t11[k] * t.t11[k] + t.t12[k] * t.t12[k] +
                          t.t21[k] * t.t21[k] + t.t22[k] * t.t22[k];
        s += 0.5 * params.nu * m2 + yield.values().v[k] * std::sqrt(m2 + e2);
    }
    return g.cell_area() * s;
}

ScalarCellField effective_viscosity_from_gradient(const PhysicsParams& params,
                                                  const YieldField& yield,
                                                  const TensorCellField& t) {
    ScalarCellField a(t.nx, t.ny);
    const double e2 = params.epsilon * params.epsilon;
    for (size_t k = 0; k < t.cells(); ++k) {
        const double m2 = t.t11[k] * t.t11[k] + t.t12[k] * t.t12[k] +
                          t.t21[k] * t.t21[k] + t.t22[k] * t.t22[k];
        a.v[k] = params.nu + yield.values().v[k] / std::sqrt(m2 + e2);
    }
    return a;
}

ScalarCellField effective_viscosity(const Grid& g, const PhysicsParams& params,
                                    const YieldField& yield, const VelocityField& u) {
    require_same_shape(g, yield.values(), "effective_viscosity");
    return effective_viscosity_from_gradient(params, yield, velocity_gradient(g, u));
}

VelocityField energy_gradient(const Grid& g, const PhysicsParams& params,
                              const YieldField& yield, const VelocityField& u) {
    TensorCellField t = velocity_gradient(g, u);
    ScalarCellField a = effective_viscosity_from_gradient(params, yield, t);
    for (size_t k = 0; k < t.cells(); ++k) {
        t.t11[k] *= a.v[k];
        t.t12[k] *= a.v[k];
        t.t21[k] *= a.v[k];
        t.t22[k] *= a.v[k];
    }
    return gradient_adjoint(g, t);
}

TensorCellField dual_multiplier(const Grid& g, const PhysicsParams& params,
                                const VelocityField& u) {
    TensorCellField t = velocity_gradient(g, u);
    const double e2 = params.epsilon * params.epsilon;
    for (size_t k = 0; k < t.cells(); ++k) {
        const double m2 = t.t11[k] * t.t11[k] + t.t12[k] * t.t12[k] +
                          t.t21[k] * t.t21[k] + t.t22[k] * t.t22[k];
        const double inv = 1.0 / std::sqrt(m2 + e2);
        t.t11[k] *= inv;
        t.t12[k] *= inv;
        t.t21[k] *= inv;
        t.t22[k] *= inv;
    }
    return t;
}

}  // namespace bingham2d
