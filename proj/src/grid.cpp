#include "bingham2d/grid.hpp"

#include <cmath>

namespace bingham2d {

Grid::Grid(double lx_, double ly_, int nx_, int ny_)
    : lx(lx_), ly(ly_), nx(nx_), ny(ny_) {
    if (!(lx > 0.0) || !(ly > 0.0))
        throw std::invalid_argument("Grid: domain extents must be positive (lx, ly > 0)");
    if (nx < 4 || ny < 4)
        throw std::invalid_argument("Grid: cell counts must satisfy nx >= 4 and ny >= 4");
    hx = lx / nx;
    hy = ly / ny;
}

void VelocityField::enforce_slip() {
    for (int j = 0; j < ny; ++j) {
        u1_at(0, j) = 0.0;
        u1_at(nx, j) = 0.0;
    }
    for (int i = 0; i < nx; ++i) {
        u2_at(i, 0) = 0.0;
        u2_at(i, ny) = 0.0;
    }
}

double VelocityField::max_normal_trace() const {
    double m = 0.0;
    for (int j = 0; j < ny; ++j) {
        m = std::max(m, std::fabs(u1_at(0, j)));
        m = std::max(m, std::fabs(u1_at(nx, j)));
    }
    for (int i = 0; i < nx; ++i) {
        m = std::max(m, std::fabs(u2_at(i, 0)));
        m = std::max(m, std::fabs(u2_at(i, ny)));
    }
    return m;
}

void require_same_shape(const Grid& g, const VelocityField& u, const char* where) {
    if (u.nx != g.nx || u.ny != g.ny)
        throw std::invalid_argument(std::string(where) + ": velocity field shape does not match grid");
}

void require_same_shape(const Grid& g, const ScalarCellField& p, const char* where) {
    if (p.nx != g.nx || p.ny != g.ny)
        throw std::invalid_argument(std::string(where) + ": cell field shape does not match grid");
}

void require_same_shape(const Grid& g, const TensorCellField& t, const char* where) {
    if (t.nx != g.nx || t.ny != g.ny)
        throw std::invalid_argument(std::string(where) + ": tensor field shape does not match grid");
}

}  // namespace bingham2d
