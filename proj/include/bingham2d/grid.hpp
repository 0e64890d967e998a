#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bingham2d {

// Uniform staggered (MAC) grid on [0,lx] x [0,ly].
// Cells are indexed (i,j), i = 0..nx-1, j = 0..ny-1, centers at
// ((i+1/2)hx, (j+1/2)hy).  u1 lives on vertical faces (i*hx, (j+1/2)hy),
// u2 on horizontal faces ((i+1/2)hx, j*hy), scalars at cell centers.
struct Grid {
    double lx = 0.0;
    double ly = 0.0;
    int nx = 0;
    int ny = 0;
    double hx = 0.0;
    double hy = 0.0;

    Grid() = default;
    Grid(double lx_, double ly_, int nx_, int ny_);

    int cell_count() const { return nx * ny; }
    double cell_area() const { return hx * hy; }

    double xc(int i) const { return (i + 0.5) * hx; }
    double yc(int j) const { return (j + 0.5) * hy; }
    double xface(int i) const { return i * hx; }
    double yface(int j) const { return j * hy; }

    bool same_as(const Grid& o) const {
        return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
    }
};

// Scalar field sampled at cell centers, row-major with x fastest.
struct ScalarCellField {
    int nx = 0;
    int ny = 0;
    std::vector<double> v;

    ScalarCellField() = default;
    ScalarCellField(int nx_, int ny_) : nx(nx_), ny(ny_), v((size_t)nx_ * ny_, 0.0) {}
    explicit ScalarCellField(const Grid& g) : ScalarCellField(g.nx, g.ny) {}

    double& at(int i, int j) { return v[(size_t)i + (size_t)nx * j]; }
    double at(int i, int j) const { return v[(size_t)i + (size_t)nx * j]; }
    size_t size() const { return v.size(); }
};

// 2x2 tensor per cell; component (m,n) approximates d u_m / d x_n.
struct TensorCellField {
    int nx = 0;
    int ny = 0;
    std::vector<double> t11, t12, t21, t22;

    TensorCellField() = default;
    TensorCellField(int nx_, int ny_)
        : nx(nx_), ny(ny_),
          t11((size_t)nx_ * ny_, 0.0), t12((size_t)nx_ * ny_, 0.0),
          t21((size_t)nx_ * ny_, 0.0), t22((size_t)nx_ * ny_, 0.0) {}
    explicit TensorCellField(const Grid& g) : TensorCellField(g.nx, g.ny) {}

    size_t idx(int i, int j) const { return (size_t)i + (size_t)nx * j; }
    size_t cells() const { return t11.size(); }
};

// Velocity on the staggered faces.  u1 has (nx+1) x ny entries, u2 has
// nx x (ny+1).  Entries on the boundary-normal faces (u1 at i = 0, nx and
// u2 at j = 0, ny) represent u.n on the walls and are kept identically
// zero by every operation that produces a velocity field.
struct VelocityField {
    int nx = 0;
    int ny = 0;
    std::vector<double> u1;  // (nx+1) * ny
    std::vector<double> u2;  // nx * (ny+1)

    VelocityField() = default;
    VelocityField(int nx_, int ny_)
        : nx(nx_), ny(ny_),
          u1((size_t)(nx_ + 1) * ny_, 0.0),
          u2((size_t)nx_ * (ny_ + 1), 0.0) {}
    explicit VelocityField(const Grid& g) : VelocityField(g.nx, g.ny) {}

    double& u1_at(int i, int j) { return u1[(size_t)i + (size_t)(nx + 1) * j]; }
    double u1_at(int i, int j) const { return u1[(size_t)i + (size_t)(nx + 1) * j]; }
    double& u2_at(int i, int j) { return u2[(size_t)i + (size_t)nx * j]; }
    double u2_at(int i, int j) const { return u2[(size_t)i + (size_t)nx * j]; }

    // Zero the wall-normal entries (u.n = 0).
    void enforce_slip();
    double max_normal_trace() const;
};

void require_same_shape(const Grid& g, const VelocityField& u, const char* where);
void require_same_shape(const Grid& g, const ScalarCellField& p, const char* where);
void require_same_shape(const Grid& g, const TensorCellField& t, const char* where);

}  // namespace bingham2d
