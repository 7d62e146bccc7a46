#include "uavmf/env/physics.hpp"

#include <cmath>

namespace uavmf::env {

Vec2 Geometry::cell_centre(int cell) const {
  const int row = cell / grid_cols;
  const int col = cell % grid_cols;
  return {(col + 0.5) * cell_side, (row + 0.5) * cell_side};
}

Vec2 Geometry::gu_position(int cell, int gu) const {
  const Vec2 c = cell_centre(cell);
  return {c.x + gu_offsets[gu].x, c.y + gu_offsets[gu].y};
}

Vec3 Geometry::hover_position(int cell, int hover) const {
  const Vec2 g = gu_position(cell, hover);
  return {g.x, g.y, altitude};
}

double Geometry::hover_distance(int from, int to) const {
  return std::hypot(gu_offsets[from].x - gu_offsets[to].x, gu_offsets[from].y - gu_offsets[to].y);
}

ChannelParams ChannelParams::for_altitude(double altitude) {
  ChannelParams p;
  p.alpha_los = 2.225 - 0.05 * std::log10(altitude);
  p.alpha_nlos = 4.32 - 0.76 * std::log10(altitude);
  return p;
}

}  // namespace uavmf::env
