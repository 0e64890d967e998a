#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace bingham2d {

// Boundary chart described by a height function: near a boundary patch the
// wall is the graph x_d = rho(y') over y' in d-1 variables, rho(0) = 0,
// d = 2 or 3.  Polynomial charts carry analytic derivatives; callable
// charts fall back to central differences with step 1e-6.
class HeightFunction {
  public:
    struct PolyTerm {
        int px = 0;
        int py = 0;  // ignored when the surface is one-dimensional
        double c = 0.0;
    };

    // surface_dim = d - 1, must be 1 or 2; total degree of each term <= 4.
    static HeightFunction polynomial(int surface_dim, std::vector<PolyTerm> terms);
    static HeightFunction from_callable(int surface_dim,
                                        std::function<double(const Eigen::VectorXd&)> f);

    int surface_dim() const { return dim_; }
    int space_dim() const { return dim_ + 1; }
    bool analytic() const { return analytic_; }
    // identity tolerance appropriate to the derivative mode
    double derivative_tolerance() const { return analytic_ ? 1e-11 : 1e-6; }

    double value(const Eigen::VectorXd& yp) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& yp) const;

  private:
    HeightFunction() = default;
    void check_origin() const;

    int dim_ = 1;
    bool analytic_ = true;
    std::vector<PolyTerm> terms_;
    std::function<double(const Eigen::VectorXd&)> fn_;
};

struct FrameMatrices {
    Eigen::MatrixXd psi;       // d x d, symmetric
    Eigen::MatrixXd phi;       // explicit inverse of psi
    Eigen::VectorXd grad_rho;  // d-1
    double scale = 1.0;        // sqrt(|grad rho|^2 + 1)
};

// The flattening map: y = (y', y_d) -> (y' + y_d grad rho(y'), rho(y') - y_d).
// Points with y_d = 0 land on the wall; y_d > 0 is the fluid side.
Eigen::VectorXd flatten_map(const HeightFunction& rho, const Eigen::VectorXd& y);

FrameMatrices frame_matrices(const HeightFunction& rho, const Eigen::VectorXd& yprime);

// Outward unit normal of the graph at y', in ambient coordinates.
Eigen::VectorXd graph_normal(const HeightFunction& rho, const Eigen::VectorXd& yprime);

struct FrameIdentityReport {
    double inverse_residual = 0.0;     // |psi*phi - I|_inf
    double symmetry_residual = 0.0;    // |psi - psi^T|_inf
    double psi_normal_residual = 0.0;  // |psi N - scale * (0,..,0,-1)|_inf
    double phi_normal_residual = 0.0;  // |phi N - (1/scale) * (0,..,0,-1)|_inf
    double tangency_residual = 0.0;    // |v.N + scale * (phi v)_d| over probe vectors
    double roundtrip_residual = 0.0;   // |psi(phi v) - v|_inf over probe vectors

    double max_residual() const;
};

// Verifies the algebraic identities of the frame at one surface point,
// probing the vector identities with a fixed set of directions.
FrameIdentityReport check_frame_identities(const HeightFunction& rho,
                                           const Eigen::VectorXd& yprime);

// v_underline = phi * v  (components in the flattened frame)
Eigen::VectorXd to_flat_frame(const FrameMatrices& fm, const Eigen::VectorXd& v);
// v = psi * v_underline
Eigen::VectorXd from_flat_frame(const FrameMatrices& fm, const Eigen::VectorXd& v_underline);

}  // namespace bingham2d
