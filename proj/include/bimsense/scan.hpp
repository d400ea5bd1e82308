#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "bimsense/geometry.hpp"

namespace bimsense {

/// Planar LiDAR geometry. Beam k points at angle_min + k * angle_increment
/// relative to the sensor yaw.
struct SensorSpec {
  double angle_min = -3.14159265358979323846;
  double angle_max = 3.14159265358979323846 - 2.0 * 3.14159265358979323846 / 360.0;
  double angle_increment = 2.0 * 3.14159265358979323846 / 360.0;
  double range_max = 12.0;
  double range_noise_sigma = 0.0;

  std::size_t beam_count() const {
    return static_cast<std::size_t>(
               std::floor((angle_max - angle_min) / angle_increment + 1e-9)) +
           1;
  }
  bool valid() const {
    return angle_increment > 0.0 && angle_max >= angle_min && range_max > 0.0;
  }
};

/// One planar sweep. Beams without a return hold kNoReturn.
struct Scan {
  static constexpr double kNoReturn = std::numeric_limits<double>::infinity();

  Pose2D pose{};
  double angle_min = 0.0;
  double angle_max = 0.0;
  double angle_increment = 0.0;
  double range_max = 0.0;
  double timestamp = 0.0;
  std::vector<double> ranges;

  static bool is_hit(double r) { return std::isfinite(r); }
  double beam_angle(std::size_t k) const {
    return pose.yaw + angle_min + static_cast<double>(k) * angle_increment;
  }
};

}  // namespace bimsense
