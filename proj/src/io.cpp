#include "bingham2d/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace bingham2d {

void ensure_dir(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw std::runtime_error("cannot create directory " + path + ": " + ec.message());
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps line endings fixed
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

}  // namespace

void write_scalar_csv(const std::string& path, const Grid& g, const ScalarCellField& f) {
    require_same_shape(g, f, "write_scalar_csv");
    std::ofstream out = open_out(path);
    out << "x,y,value\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out << format_double(g.xc(i)) << ',' << format_double(g.yc(j)) << ','
                << format_double(f.at(i, j)) << '\n';
    if (!out) throw std::runtime_error("short write to " + path);
}

void write_velocity_csv(const std::string& path, const Grid& g, const VelocityField& u) {
    require_same_shape(g, u, "write_velocity_csv");
    std::ofstream out = open_out(path);
    out << "x,y,u1,u2\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double u1c = 0.5 * (u.u1_at(i, j) + u.u1_at(i + 1, j));
            const double u2c = 0.5 * (u.u2_at(i, j) + u.u2_at(i, j + 1));
            out << format_double(g.xc(i)) << ',' << format_double(g.yc(j)) << ','
                << format_double(u1c) << ',' << format_double(u2c) << '\n';
        }
    if (!out) throw std::runtime_error("short write to " + path);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out = open_out(path);
    out << text;
    if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace bingham2d
