#pragma once

#include <cmath>

namespace vanet {

struct Vec2 {
  double x = 0;
  double y = 0;
};

inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double kmh_to_mps(double kmh) { return kmh * (1000.0 / 3600.0); }

}  // namespace vanet
