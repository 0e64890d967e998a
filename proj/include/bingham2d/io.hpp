#pragma once

#include <string>

#include "bingham2d/grid.hpp"

namespace bingham2d {

void ensure_dir(const std::string& path);

// Shared field dump format: header `x,y,value` or `x,y,u1,u2`, cell-center
// coordinates, face values averaged to centers, %.17g floats, y outer loop.
void write_scalar_csv(const std::string& path, const Grid& g, const ScalarCellField& f);
void write_velocity_csv(const std::string& path, const Grid& g, const VelocityField& u);

void write_text(const std::string& path, const std::string& text);

std::string format_double(double v);  // %.17g

}  // namespace bingham2d
