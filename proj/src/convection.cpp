#include "bingham2d/convection.hpp"

namespace bingham2d {

double trilinear_form(const Grid& g, const VelocityField& w, const VelocityField& u,
                      const VelocityField& v) {
    ScalarCellField w1c, w2c, v1c, v2c;
    average_to_centers(g, w, w1c, w2c);
    average_to_centers(g, v, v1c, v2c);
    TensorCellField t = velocity_gradient(g, u);
    double s = 0.0;
    for (size_t k = 0; k < t.cells(); ++k) {
        const double m1 = w1c.v[k] * t.t11[k] + w2c.v[k] * t.t12[k];
        const double m2 = w1c.v[k] * t.t21[k] + w2c.v[k] * t.t22[k];
        s += m1 * v1c.v[k] + m2 * v2c.v[k];
    }
    return g.cell_area() * s;
}

FrozenAdvection::FrozenAdvection(const Grid& g, const VelocityField& w, double M) {
    require_same_shape(g, w, "FrozenAdvection");
    average_to_centers(g, w, w1c_, w2c_);
    if (M > 0.0) {
        const double n2 = dot(g, w, w) +
                          [&] { TensorCellField t = velocity_gradient(g, w); return dot(g, t, t); }();
        factor_ = (n2 <= M * M || n2 == 0.0) ? 1.0 : (M * M) / n2;
    }
}

void FrozenAdvection::accumulate(const Grid& g, const VelocityField& u, VelocityField& out,
                                 double scale) const {
    const double c = 0.5 * scale * factor_;
    if (c == 0.0) return;

    TensorCellField t = velocity_gradient(g, u);
    ScalarCellField m1(g.nx, g.ny), m2(g.nx, g.ny);
    for (size_t k = 0; k < t.cells(); ++k) {
        m1.v[k] = w1c_.v[k] * t.t11[k] + w2c_.v[k] * t.t12[k];
        m2.v[k] = w1c_.v[k] * t.t21[k] + w2c_.v[k] * t.t22[k];
    }
    axpy_inplace(c, average_adjoint(g, m1, m2), out);

    // transpose part: b_h(w, v, u) = (S, velocity_gradient(v))_h with
    // S_{mn} = w_n * u_m at centers
    ScalarCellField u1c, u2c;
    average_to_centers(g, u, u1c, u2c);
    TensorCellField s(g.nx, g.ny);
    for (size_t k = 0; k < s.cells(); ++k) {
        s.t11[k] = w1c_.v[k] * u1c.v[k];
        s.t12[k] = w2c_.v[k] * u1c.v[k];
        s.t21[k] = w1c_.v[k] * u2c.v[k];
        s.t22[k] = w2c_.v[k] * u2c.v[k];
    }
    axpy_inplace(-c, gradient_adjoint(g, s), out);
}

VelocityField convection(const Grid& g, const VelocityField& w, const VelocityField& u) {
    FrozenAdvection adv(g, w, 0.0);  // M = 0 disables truncation
    VelocityField out(g.nx, g.ny);
    adv.accumulate(g, u, out);
    return out;
}

double convection_truncation_factor(const Grid& g, const VelocityField& w, double M) {
    if (!(M > 0.0))
        throw std::invalid_argument("convection_truncation_factor: M must be positive");
    const double n = v_norm(g, w);
    const double n2 = n * n;
    return (n2 <= M * M || n2 == 0.0) ? 1.0 : (M * M) / n2;
}

VelocityField truncated_convection(const Grid& g, const VelocityField& w,
                                   const VelocityField& u, double M) {
    const double f = convection_truncation_factor(g, w, M);
    VelocityField out = convection(g, w, u);
    scale_inplace(out, f);
    return out;
}

}  // namespace bingham2d
