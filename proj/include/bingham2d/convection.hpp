#pragma once

#include "bingham2d/grid.hpp"
#include "bingham2d/operators.hpp"

namespace bingham2d {

// Discrete trilinear form b_h(w,u,v) = sum_c hx*hy * ((w_c . grad)u)_c . v_c
// with all factors collocated at cell centers (face values averaged, the
// gradient from velocity_gradient).
double trilinear_form(const Grid& g, const VelocityField& w, const VelocityField& u,
                      const VelocityField& v);

// Riesz representative of the skew-symmetrized form:
// (convection(w,u), v)_h = 0.5*(b_h(w,u,v) - b_h(w,v,u)), so that
// (convection(w,u), u)_h = 0 exactly regardless of div w.
VelocityField convection(const Grid& g, const VelocityField& w, const VelocityField& u);

// min(1, M^2 / ||w||_{V,h}^2): scale factor of the truncated operator.
double convection_truncation_factor(const Grid& g, const VelocityField& w, double M);

// factor(w) * convection(w, u).
VelocityField truncated_convection(const Grid& g, const VelocityField& w,
                                   const VelocityField& u, double M);

// Advecting field frozen for a sequence of linear-operator applies.
class FrozenAdvection {
  public:
    FrozenAdvection(const Grid& g, const VelocityField& w, double M);

    double factor() const { return factor_; }
    // out += scale * factor * B_skew(w, u)
    void accumulate(const Grid& g, const VelocityField& u, VelocityField& out,
                    double scale = 1.0) const;

  private:
    ScalarCellField w1c_, w2c_;
    double factor_ = 1.0;
};

}  // namespace bingham2d
