#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "swarm/geom.hpp"

namespace swarm {

struct DetectionParams {
    double r_d{2.0};                 // detection range [m]
    double r_s{1.0};                 // safety range [m]
    double theta_fov{kPi / 3.0};     // FOV half-angle [rad]

    bool operator==(const DetectionParams&) const = default;

    void validate() const;  // throws std::invalid_argument
};

struct ObstacleView {
    Vec3 center;
    double radius{0.0};
    int id{0};
};

/// How the planar horizontal-bearing and vertical-elevation tests combine.
/// Conjunctive gives a true sector; Disjunctive is the literal "or" reading.
enum class VerticalTest { Conjunctive, Disjunctive };

/// Indices j != i with |p_i - p_j| < radius, ascending.
std::vector<std::size_t> neighbor_set(std::span<const Vec3> positions, std::size_t i, double radius);

/// True when the obstacle is within r_d + radius of p.
bool in_detection_range(const Vec3& p, const ObstacleView& obstacle, const DetectionParams& params);

/// Planar sector detection about heading (radians, measured from +x).
bool detect_planar(const Vec3& p, double heading, const ObstacleView& obstacle,
                   const DetectionParams& params,
                   VerticalTest vertical = VerticalTest::Conjunctive);

/// Conical detection about the velocity direction. A (near) stationary agent
/// falls back to the range test alone.
bool detect_3d(const Vec3& p, const Vec3& v, const ObstacleView& obstacle,
               const DetectionParams& params);

}  // namespace swarm
