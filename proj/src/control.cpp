#include "swarm/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace swarm {

void Gains::validate() const {
    const std::pair<const char*, const DiagGain*> diag[] = {
        {"K_p", &formation_p},     {"K_v", &formation_v},         {"k_c1", &collision_spring},
        {"k_c2", &collision_damping}, {"k_v", &obstacle_scale},   {"k_o1", &obstacle_repulsion},
        {"k_o2", &obstacle_damping},
    };
    for (const auto& [name, g] : diag)
        if (!g->positive()) throw std::invalid_argument(std::string("gains: ") + name + " must be positive definite");
    if (!(rotation > 0.0)) throw std::invalid_argument("gains: k_r must be positive");
}

double UavState::heading() const {
    if (std::hypot(v.x, v.y) > kSpeedEpsilon) return std::atan2(v.y, v.x);
    return last_heading;
}

Vec3 formation_accel(const Vec3& p, const Vec3& v, const Vec3& target, const Vec3& target_velocity,
                     const Gains& gains) {
    return -(gains.formation_p * (p - target)) - gains.formation_v * (v - target_velocity);
}

CollisionResult collision_accel(std::size_t i, std::span<const UavState> states, const Gains& gains,
                                const DetectionParams& params, double activation_radius,
                                CollisionTrigger trigger) {
    CollisionResult out;
    const UavState& me = states[i];
    for (std::size_t j = 0; j < states.size(); ++j) {
        if (j == i) continue;
        const Vec3 p_ij = states[j].p - me.p;
        const double d = norm(p_ij);
        const bool active = trigger == CollisionTrigger::Band ? d < activation_radius : d < params.r_s;
        if (!active) continue;

        // The singular factor is held at 1/clamp^2 within kCollisionClamp of r_s.
        const double gap = trigger == CollisionTrigger::Band
                               ? std::max(d - params.r_s, kCollisionClamp)
                               : std::max(std::abs(d - params.r_s), kCollisionClamp);
        const double factor = 1.0 / (gap * gap);
        const Vec3 dir = d > 0.0 ? p_ij / d : Vec3{};
        const Vec3 spring = dir * factor;
        const Vec3 v_ij = states[j].v - me.v;
        out.accel += -(gains.collision_spring * spring) + gains.collision_damping * v_ij;
        out.active.push_back(j);
    }
    return out;
}

std::pair<double, double> obstacle_potentials(const Vec3& p, const ObstacleView& obstacle,
                                              const Gains& gains, const DetectionParams& params,
                                              bool detected) {
    if (!detected) return {0.0, 0.0};
    const Vec3 x = p - obstacle.center;
    const double r_a = params.r_d + obstacle.radius;
    const double s = norm(gains.obstacle_scale * x) - r_a;
    const double alpha = avoidance_angle(norm(x), params.r_s, params.r_d);
    const double r = norm(rot3(alpha) * x);
    return {0.5 * s * s, 0.5 * gains.rotation * r * r};
}

Vec3 translational_gradient(const Vec3& x, const DiagGain& scale, double r_a) {
    const Vec3 kx = scale * x;
    const double n = norm(kx);
    const Vec3 dir = n < 1e-9 ? Vec3{0.0, 0.0, 1.0} : kx / n;
    return dir * (n - r_a);
}

Vec3 rotational_force(const Vec3& x, double alpha, double k_r, Maneuver mode) {
    const Vec3 rx = mode == Maneuver::Planar ? rot2(alpha).apply_xy(x) : rot3(alpha) * x;
    return rx * k_r;
}

ObstacleResult obstacle_accel(const UavState& state, std::span<const ObstacleView> obstacles,
                              Maneuver mode, const Gains& gains, const DetectionParams& params,
                              VerticalTest vertical) {
    ObstacleResult out;
    Vec3 grad_sum, rot_sum;
    const double heading = state.heading();
    for (const auto& ob : obstacles) {
        const bool detected = mode == Maneuver::Planar
                                  ? detect_planar(state.p, heading, ob, params, vertical)
                                  : detect_3d(state.p, state.v, ob, params);
        if (!detected) continue;
        out.detected.push_back(ob.id);

        const Vec3 x = state.p - ob.center;
        const double r_a = params.r_d + ob.radius;
        if (norm(gains.obstacle_scale * x) < 1e-9) ++out.penetrations;
        grad_sum += translational_gradient(x, gains.obstacle_scale, r_a);
        const double alpha = avoidance_angle(norm(x), params.r_s, params.r_d);
        rot_sum += rotational_force(x, alpha, gains.rotation, mode);
    }
    if (out.detected.empty()) return out;

    out.accel = -(gains.obstacle_repulsion * grad_sum) - rot_sum - gains.obstacle_damping * state.v;
    if (mode == Maneuver::Planar) out.accel.z = 0.0;
    return out;
}

ControlBreakdown total_accel(const Vec3& u_f, const Vec3& u_c, const Vec3& u_o) {
    ControlBreakdown b;
    b.u_f = u_f;
    b.u_c = u_c;
    b.u_o = u_o;
    b.u_total = u_f + u_c + u_o;
    return b;
}

}  // namespace swarm
