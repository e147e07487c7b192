#include "swarm/detect.hpp"

#include <cmath>
#include <stdexcept>

namespace swarm {

void DetectionParams::validate() const {
    if (!(r_s > 0.0) || !(r_s < r_d))
        throw std::invalid_argument("detection: requires 0 < r_s < r_d");
    if (!(theta_fov > 0.0) || !(theta_fov < kPi))
        throw std::invalid_argument("detection: requires 0 < theta_fov < pi");
}

std::vector<std::size_t> neighbor_set(std::span<const Vec3> positions, std::size_t i, double radius) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < positions.size(); ++j) {
        if (j == i) continue;
        if (distance(positions[i], positions[j]) < radius) out.push_back(j);
    }
    return out;
}

bool in_detection_range(const Vec3& p, const ObstacleView& obstacle, const DetectionParams& params) {
    return distance(p, obstacle.center) <= params.r_d + obstacle.radius;
}

bool detect_planar(const Vec3& p, double heading, const ObstacleView& obstacle,
                   const DetectionParams& params, VerticalTest vertical) {
    if (!in_detection_range(p, obstacle, params)) return false;
    const Vec3 rel = obstacle.center - p;
    const double bearing = std::atan2(rel.y, rel.x);
    const bool horizontal = std::abs(wrap_angle(bearing - heading)) < params.theta_fov;
    // Elevation is measured against the inertial x axis.
    const bool elevation = std::abs(std::atan2(rel.z, rel.x)) <= params.theta_fov;
    return vertical == VerticalTest::Conjunctive ? (horizontal && elevation)
                                                 : (horizontal || elevation);
}

bool detect_3d(const Vec3& p, const Vec3& v, const ObstacleView& obstacle,
               const DetectionParams& params) {
    if (!in_detection_range(p, obstacle, params)) return false;
    if (norm(v) <= kSpeedEpsilon) return true;
    const auto theta = angle_between(obstacle.center - p, v);
    if (!theta) return false;  // obstacle centre coincides with the agent
    return *theta <= params.theta_fov;
}

}  // namespace swarm
