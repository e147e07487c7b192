#pragma once

#include <vector>

#include "swarm/cvt.hpp"
#include "swarm/detect.hpp"
#include "swarm/geom.hpp"

namespace swarm {

/// Sphere obstacle that is stationary until activation_time and then moves
/// with constant velocity.
struct Obstacle {
    int id{0};
    Vec3 center;
    double radius{1.0};
    Vec3 velocity;
    double activation_time{0.0};

    void validate() const;
    bool operator==(const Obstacle&) const = default;
};

Vec3 obstacle_center_at(const Obstacle& obstacle, double t);
ObstacleView obstacle_view_at(const Obstacle& obstacle, double t);

/// Axis-aligned box building.
struct Building {
    Vec3 lo;
    Vec3 hi;

    void validate() const;
    bool contains(const Vec3& p) const;  // closed box
    bool operator==(const Building&) const = default;
};

/// Zero-radius virtual obstacle at the point of the box surface nearest to p.
/// For p inside the box this is the nearest face point; ties go to the
/// lowest axis, min face before max face.
ObstacleView building_proxy(const Vec3& p, const Building& building, int id = -1);

/// Euclidean distance from p to the box (0 when inside).
double distance_to_box(const Vec3& p, const Building& building);

/// Planar rectangle at fixed altitude translating with constant velocity.
/// Targets are stored in barrier-local coordinates relative to origin.
struct Barrier {
    Vec3 origin;           // x, y of the min corner at t = 0
    double size_x{10.0};
    double size_y{10.0};
    double altitude{5.0};
    Vec3 velocity{1.0, 0.0, 0.0};
    std::vector<Vec3> base_targets;

    void validate() const;
    /// Sampling region in barrier-local coordinates.
    Region local_region() const;
    bool operator==(const Barrier&) const = default;
};

std::vector<Vec3> barrier_targets_at(const Barrier& barrier, double t);

}  // namespace swarm
