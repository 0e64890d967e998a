#include "bingham2d/frame.hpp"

#include <cmath>
#include <stdexcept>

namespace bingham2d {

HeightFunction HeightFunction::polynomial(int surface_dim, std::vector<PolyTerm> terms) {
    if (surface_dim != 1 && surface_dim != 2)
        throw std::invalid_argument("HeightFunction: surface dimension must be 1 or 2");
    for (const PolyTerm& t : terms) {
        if (t.px < 0 || t.py < 0 || t.px + t.py > 4)
            throw std::invalid_argument("HeightFunction: polynomial terms limited to total degree 4");
        if (surface_dim == 1 && t.py != 0)
            throw std::invalid_argument("HeightFunction: second variable unused for a 1-d surface");
    }
    HeightFunction h;
    h.dim_ = surface_dim;
    h.analytic_ = true;
    h.terms_ = std::move(terms);
    h.check_origin();
    return h;
}

HeightFunction HeightFunction::from_callable(int surface_dim,
                                             std::function<double(const Eigen::VectorXd&)> f) {
    if (surface_dim != 1 && surface_dim != 2)
        throw std::invalid_argument("HeightFunction: surface dimension must be 1 or 2");
    if (!f) throw std::invalid_argument("HeightFunction: callable must be nonempty");
    HeightFunction h;
    h.dim_ = surface_dim;
    h.analytic_ = false;
    h.fn_ = std::move(f);
    h.check_origin();
    return h;
}

void HeightFunction::check_origin() const {
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(dim_);
    if (std::fabs(value(zero)) > 1e-12)
        throw std::invalid_argument("HeightFunction: rho(0) must vanish (|rho(0)| <= 1e-12)");
}

double HeightFunction::value(const Eigen::VectorXd& yp) const {
    if (yp.size() != dim_)
        throw std::invalid_argument("HeightFunction: argument dimension mismatch");
    if (!analytic_) return fn_(yp);
    double s = 0.0;
    const double a = yp(0);
    const double b = (dim_ == 2) ? yp(1) : 0.0;
    for (const PolyTerm& t : terms_)
        s += t.c * std::pow(a, t.px) * ((dim_ == 2) ? std::pow(b, t.py) : 1.0);
    return s;
}

Eigen::VectorXd HeightFunction::gradient(const Eigen::VectorXd& yp) const {
    if (yp.size() != dim_)
        throw std::invalid_argument("HeightFunction: argument dimension mismatch");
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim_);
    if (analytic_) {
        const double a = yp(0);
        const double b = (dim_ == 2) ? yp(1) : 0.0;
        for (const PolyTerm& t : terms_) {
            if (t.px > 0)
                g(0) += t.c * t.px * std::pow(a, t.px - 1) *
                        ((dim_ == 2) ? std::pow(b, t.py) : 1.0);
            if (dim_ == 2 && t.py > 0)
                g(1) += t.c * t.py * std::pow(a, t.px) * std::pow(b, t.py - 1);
        }
        return g;
    }
    const double step = 1e-6;
    for (int k = 0; k < dim_; ++k) {
        Eigen::VectorXd hi = yp, lo = yp;
        hi(k) += step;
        lo(k) -= step;
        g(k) = (fn_(hi) - fn_(lo)) / (2.0 * step);
    }
    return g;
}

Eigen::VectorXd flatten_map(const HeightFunction& rho, const Eigen::VectorXd& y) {
    const int d = rho.space_dim();
    if (y.size() != d)
        throw std::invalid_argument("flatten_map: point dimension mismatch");
    const Eigen::VectorXd yp = y.head(d - 1);
    const double yd = y(d - 1);
    Eigen::VectorXd x(d);
    x.head(d - 1) = yp + yd * rho.gradient(yp);
    x(d - 1) = rho.value(yp) - yd;
    return x;
}

FrameMatrices frame_matrices(const HeightFunction& rho, const Eigen::VectorXd& yprime) {
    const int dp = rho.surface_dim();
    if (yprime.size() != dp)
        throw std::invalid_argument("frame_matrices: point dimension mismatch");
    const int d = dp + 1;
    FrameMatrices fm;
    fm.grad_rho = rho.gradient(yprime);
    const double q = fm.grad_rho.squaredNorm() + 1.0;
    fm.scale = std::sqrt(q);

    fm.psi = Eigen::MatrixXd::Zero(d, d);
    fm.psi.topLeftCorner(dp, dp) = Eigen::MatrixXd::Identity(dp, dp);
    fm.psi.topRightCorner(dp, 1) = fm.grad_rho;
    fm.psi.bottomLeftCorner(1, dp) = fm.grad_rho.transpose();
    fm.psi(dp, dp) = -1.0;

    fm.phi = Eigen::MatrixXd::Zero(d, d);
    fm.phi.topLeftCorner(dp, dp) =
        (q * Eigen::MatrixXd::Identity(dp, dp) - fm.grad_rho * fm.grad_rho.transpose()) / q;
    fm.phi.topRightCorner(dp, 1) = fm.grad_rho / q;
    fm.phi.bottomLeftCorner(1, dp) = fm.grad_rho.transpose() / q;
    fm.phi(dp, dp) = -1.0 / q;
    return fm;
}

Eigen::VectorXd graph_normal(const HeightFunction& rho, const Eigen::VectorXd& yprime) {
    const int dp = rho.surface_dim();
    Eigen::VectorXd n(dp + 1);
    const Eigen::VectorXd g = rho.gradient(yprime);
    n.head(dp) = -g;
    n(dp) = 1.0;
    n /= std::sqrt(g.squaredNorm() + 1.0);
    return n;
}

Eigen::VectorXd to_flat_frame(const FrameMatrices& fm, const Eigen::VectorXd& v) {
    if (v.size() != fm.psi.rows())
        throw std::invalid_argument("to_flat_frame: vector dimension mismatch");
    return fm.phi * v;
}

Eigen::VectorXd from_flat_frame(const FrameMatrices& fm, const Eigen::VectorXd& v_underline) {
    if (v_underline.size() != fm.psi.rows())
        throw std::invalid_argument("from_flat_frame: vector dimension mismatch");
    return fm.psi * v_underline;
}

double FrameIdentityReport::max_residual() const {
    double m = inverse_residual;
    m = std::max(m, symmetry_residual);
    m = std::max(m, psi_normal_residual);
    m = std::max(m, phi_normal_residual);
    m = std::max(m, tangency_residual);
    m = std::max(m, roundtrip_residual);
    return m;
}

FrameIdentityReport check_frame_identities(const HeightFunction& rho,
                                           const Eigen::VectorXd& yprime) {
    const FrameMatrices fm = frame_matrices(rho, yprime);
    const int d = rho.space_dim();
    FrameIdentityReport rep;

    rep.inverse_residual =
        (fm.psi * fm.phi - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
    rep.symmetry_residual = (fm.psi - fm.psi.transpose()).cwiseAbs().maxCoeff();

    const Eigen::VectorXd n = graph_normal(rho, yprime);
    Eigen::VectorXd down = Eigen::VectorXd::Zero(d);
    down(d - 1) = -1.0;
    rep.psi_normal_residual = (fm.psi * n - fm.scale * down).cwiseAbs().maxCoeff();
    rep.phi_normal_residual = (fm.phi * n - down / fm.scale).cwiseAbs().maxCoeff();

    // v . n = -scale * (phi v)_d for every v; probe with a basis and a
    // skewed direction
    for (int k = 0; k <= d; ++k) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
        if (k < d)
            v(k) = 1.0;
        else
            for (int i = 0; i < d; ++i) v(i) = 1.0 + i;
        const double lhs = v.dot(n);
        const double rhs = -fm.scale * (fm.phi * v)(d - 1);
        rep.tangency_residual = std::max(rep.tangency_residual, std::fabs(lhs - rhs));
        rep.roundtrip_residual = std::max(
            rep.roundtrip_residual, (fm.psi * (fm.phi * v) - v).cwiseAbs().maxCoeff());
    }
    return rep;
}

}  // namespace bingham2d
