#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "swarm/detect.hpp"
#include "swarm/geom.hpp"

namespace swarm {

/// Diagonal positive-definite gain matrix.
struct DiagGain {
    Vec3 diag{1.0, 1.0, 1.0};

    static constexpr DiagGain uniform(double k) { return DiagGain{{k, k, k}}; }
    constexpr Vec3 operator*(const Vec3& v) const { return hadamard(diag, v); }
    bool positive() const { return diag.x > 0.0 && diag.y > 0.0 && diag.z > 0.0; }
    bool operator==(const DiagGain&) const = default;
};

/// Controller constants. Defaults are the published simulation values; the
/// collision gains are not published and default to identity.
struct Gains {
    DiagGain formation_p{DiagGain::uniform(3.0)};
    DiagGain formation_v{DiagGain::uniform(5.0)};
    DiagGain collision_spring{DiagGain::uniform(1.0)};
    DiagGain collision_damping{DiagGain::uniform(1.0)};
    DiagGain obstacle_scale{{0.1, 0.5, 0.1}};
    double rotation{0.5};
    DiagGain obstacle_repulsion{DiagGain::uniform(5.0)};
    DiagGain obstacle_damping{DiagGain::uniform(1.0)};

    void validate() const;  // throws std::invalid_argument
    bool operator==(const Gains&) const = default;
};

struct UavState {
    int id{0};
    Vec3 p;
    Vec3 v;
    double last_heading{0.0};

    /// Flight direction in the xy plane; reuses last_heading when hovering.
    double heading() const;
};

enum class Maneuver { Planar, Spatial };

/// Literal fires only inside the safety range; Band fires anywhere inside
/// the activation radius, with the singular factor clamped near r_s.
enum class CollisionTrigger { Band, Literal };

inline constexpr double kCollisionClamp = 1e-2;

struct ControlBreakdown {
    Vec3 u_f;
    Vec3 u_c;
    Vec3 u_o;
    Vec3 u_total;
    std::vector<int> detected_obstacles;   // ids
    std::vector<std::size_t> active_neighbors;
    int penetrations{0};
};

/// PD tracking of a (moving) formation target.
Vec3 formation_accel(const Vec3& p, const Vec3& v, const Vec3& target, const Vec3& target_velocity,
                     const Gains& gains);

struct CollisionResult {
    Vec3 accel;
    std::vector<std::size_t> active;
};

/// Spring-damper repulsion summed over every neighbour that triggers.
CollisionResult collision_accel(std::size_t i, std::span<const UavState> states, const Gains& gains,
                                const DetectionParams& params, double activation_radius,
                                CollisionTrigger trigger = CollisionTrigger::Band);

/// (translational, rotational) potential values; both zero unless detected.
std::pair<double, double> obstacle_potentials(const Vec3& p, const ObstacleView& obstacle,
                                              const Gains& gains, const DetectionParams& params,
                                              bool detected);

/// Translational potential gradient for x = p - o:
/// (|k x| - r_a) * (k x) / |k x|. Falls back to +z when |k x| vanishes.
Vec3 translational_gradient(const Vec3& x, const DiagGain& scale, double r_a);

/// Rotated repulsion k_r * R(alpha) * x. In planar mode R acts on the xy
/// components only.
Vec3 rotational_force(const Vec3& x, double alpha, double k_r, Maneuver mode);

struct ObstacleResult {
    Vec3 accel;
    std::vector<int> detected;  // ids of detected obstacles
    int penetrations{0};        // detected obstacles whose centre coincides with the agent
};

ObstacleResult obstacle_accel(const UavState& state, std::span<const ObstacleView> obstacles,
                              Maneuver mode, const Gains& gains, const DetectionParams& params,
                              VerticalTest vertical = VerticalTest::Conjunctive);

ControlBreakdown total_accel(const Vec3& u_f, const Vec3& u_c, const Vec3& u_o);

}  // namespace swarm
