#pragma once

namespace bimsense {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  friend bool operator==(const Point3&, const Point3&) = default;
};

/// East-North-Up to North-East-Down: (x, y, z) -> (y, x, -z).
constexpr Point3 enu_to_ned(Point3 p) { return {p.y, p.x, -p.z}; }

/// Inverse of enu_to_ned (the map is its own inverse).
constexpr Point3 ned_to_enu(Point3 p) { return {p.y, p.x, -p.z}; }

}  // namespace bimsense
