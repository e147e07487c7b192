#include "swarm/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace swarm {

void Obstacle::validate() const {
    if (!(radius >= 0.0)) throw std::invalid_argument("obstacle: radius must be non-negative");
    if (!(activation_time >= 0.0)) throw std::invalid_argument("obstacle: activation_time must be non-negative");
    if (!is_finite(center) || !is_finite(velocity)) throw std::invalid_argument("obstacle: non-finite geometry");
}

Vec3 obstacle_center_at(const Obstacle& obstacle, double t) {
    if (t <= obstacle.activation_time) return obstacle.center;
    return obstacle.center + obstacle.velocity * (t - obstacle.activation_time);
}

ObstacleView obstacle_view_at(const Obstacle& obstacle, double t) {
    return ObstacleView{obstacle_center_at(obstacle, t), obstacle.radius, obstacle.id};
}

void Building::validate() const {
    if (!(lo.x < hi.x && lo.y < hi.y && lo.z < hi.z))
        throw std::invalid_argument("building: min corner must be below max corner on every axis");
}

bool Building::contains(const Vec3& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z;
}

ObstacleView building_proxy(const Vec3& p, const Building& building, int id) {
    Vec3 q;
    for (int a = 0; a < 3; ++a) q[a] = std::clamp(p[a], building.lo[a], building.hi[a]);
    if (building.contains(p)) {
        int best_axis = 0;
        bool to_max = false;
        double best = std::numeric_limits<double>::infinity();
        for (int a = 0; a < 3; ++a) {
            const double to_lo = p[a] - building.lo[a];
            const double to_hi = building.hi[a] - p[a];
            if (to_lo < best) { best = to_lo; best_axis = a; to_max = false; }
            if (to_hi < best) { best = to_hi; best_axis = a; to_max = true; }
        }
        q = p;
        q[best_axis] = to_max ? building.hi[best_axis] : building.lo[best_axis];
    }
    return ObstacleView{q, 0.0, id};
}

double distance_to_box(const Vec3& p, const Building& building) {
    Vec3 q;
    for (int a = 0; a < 3; ++a) q[a] = std::clamp(p[a], building.lo[a], building.hi[a]);
    return distance(p, q);
}

void Barrier::validate() const {
    if (!(size_x > 0.0 && size_y > 0.0)) throw std::invalid_argument("barrier: extents must be positive");
    if (!is_finite(origin) || !is_finite(velocity) || !std::isfinite(altitude))
        throw std::invalid_argument("barrier: non-finite geometry");
    for (const auto& t : base_targets)
        if (t.x < 0.0 || t.x > size_x || t.y < 0.0 || t.y > size_y)
            throw std::invalid_argument("barrier: target outside the barrier extents");
}

Region Barrier::local_region() const { return Region::rectangle(0.0, 0.0, size_x, size_y, 0.0); }

std::vector<Vec3> barrier_targets_at(const Barrier& barrier, double t) {
    std::vector<Vec3> out;
    out.reserve(barrier.base_targets.size());
    const Vec3 shift = barrier.velocity * t;
    for (const auto& local : barrier.base_targets)
        out.push_back({barrier.origin.x + local.x + shift.x, barrier.origin.y + local.y + shift.y,
                       barrier.altitude + shift.z});
    return out;
}

}  // namespace swarm
