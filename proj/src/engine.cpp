#include "swarm/engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace swarm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void SimConfig::validate() const {
    require(dt > 0.0, "config: dt must be positive");
    require(duration >= dt, "config: duration must be at least dt");
    require(agents >= 1, "config: agent count must be at least 1");
    require(init.variance.x >= 0.0 && init.variance.y >= 0.0 && init.variance.z >= 0.0,
            "config: initial variance must be non-negative");
    require(init.min_separation >= 0.0, "config: min_separation must be non-negative");
    gains.validate();
    detection.validate();
    require(neighbor_radius > detection.r_s, "config: neighbor_radius must exceed r_s");
    barrier.validate();
    effective_lloyd().validate();
    require(retessellate_period >= 0.0, "config: retessellate_period must be non-negative");
    for (const auto& o : obstacles) o.validate();
    for (const auto& b : buildings) b.validate();
    require(bounds_lo.x < bounds_hi.x && bounds_lo.y < bounds_hi.y && bounds_lo.z < bounds_hi.z,
            "config: world bounds must be a non-empty box");
}

std::size_t SimConfig::step_count() const {
    return static_cast<std::size_t>(std::llround(duration / dt));
}

LloydParams SimConfig::effective_lloyd() const {
    LloydParams p = lloyd;
    p.n = agents;
    if (p.samples <= 0) p.samples = 100 * agents;
    return p;
}

UavState integrate_step(const UavState& state, const Vec3& u, double dt) {
    if (!is_finite(u))
        throw DivergenceError("non-finite control input for agent " + std::to_string(state.id));
    UavState next = state;
    next.v = state.v + u * dt;
    next.p = state.p + next.v * dt;
    if (std::hypot(next.v.x, next.v.y) > kSpeedEpsilon) next.last_heading = std::atan2(next.v.y, next.v.x);
    return next;
}

ControlBreakdown agent_control(std::size_t i, std::span<const UavState> states, const Vec3& target,
                               std::span<const ObstacleView> obstacles, const SimConfig& config) {
    const UavState& me = states[i];
    const Vec3 u_f = formation_accel(me.p, me.v, target, config.barrier.velocity, config.gains);
    CollisionResult col = collision_accel(i, states, config.gains, config.detection,
                                          config.neighbor_radius, config.collision_trigger);

    std::vector<ObstacleView> views(obstacles.begin(), obstacles.end());
    for (std::size_t b = 0; b < config.buildings.size(); ++b)
        views.push_back(building_proxy(me.p, config.buildings[b], -static_cast<int>(b) - 1));
    ObstacleResult obs = obstacle_accel(me, views, config.mode, config.gains, config.detection,
                                        config.vertical_test);

    ControlBreakdown out = total_accel(u_f, col.accel, obs.accel);
    out.active_neighbors = std::move(col.active);
    out.detected_obstacles = std::move(obs.detected);
    out.penetrations = obs.penetrations;
    return out;
}

std::vector<Vec3> sample_initial_positions(const SimConfig& config) {
    constexpr int kMaxDraws = 100000;
    Rng rng(config.init.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Vec3 sd{std::sqrt(config.init.variance.x), std::sqrt(config.init.variance.y),
                  std::sqrt(config.init.variance.z)};
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(config.agents));
    int draws = 0;
    while (out.size() < static_cast<std::size_t>(config.agents)) {
        if (++draws > kMaxDraws)
            throw std::invalid_argument("config: cannot place agents with the requested min_separation");
        const double gx = gauss(rng), gy = gauss(rng), gz = gauss(rng);
        const Vec3 p = config.init.mean + hadamard(sd, {gx, gy, gz});
        const bool clear = std::all_of(out.begin(), out.end(), [&](const Vec3& q) {
            return distance(p, q) >= config.init.min_separation;
        });
        if (clear) out.push_back(p);
    }
    return out;
}

namespace {

bool inside_bounds(const Vec3& p, const SimConfig& c) {
    return p.x >= c.bounds_lo.x && p.x <= c.bounds_hi.x && p.y >= c.bounds_lo.y &&
           p.y <= c.bounds_hi.y && p.z >= c.bounds_lo.z && p.z <= c.bounds_hi.z;
}

}  // namespace

TrajectoryLog run_scenario(const SimConfig& config) {
    config.validate();

    Barrier barrier = config.barrier;
    const LloydParams lloyd = config.effective_lloyd();
    const LloydResult cvt = run_lloyd(barrier.local_region(), lloyd);
    barrier.base_targets = cvt.seeds;

    const std::vector<Vec3> start = sample_initial_positions(config);
    std::vector<std::size_t> assignment = assign_targets(start, barrier_targets_at(barrier, 0.0), config.assignment);

    const std::size_t n = start.size();
    std::vector<UavState> states(n);
    for (std::size_t i = 0; i < n; ++i) states[i] = UavState{static_cast<int>(i), start[i], {}, 0.0};

    TrajectoryLog log;
    log.agents = config.agents;
    log.cvt_iterations = cvt.iterations;
    log.cvt_converged = cvt.converged;
    const std::size_t steps = config.step_count();
    log.rows.reserve((steps + 1) * n);
    log.obstacles.reserve((steps + 1) * config.obstacles.size());

    std::size_t next_retessellation = 0;
    const std::size_t retess_every =
        config.retessellate_period > 0.0
            ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(config.retessellate_period / config.dt)))
            : 0;
    if (retess_every > 0) next_retessellation = retess_every;

    std::vector<ObstacleView> views(config.obstacles.size());
    std::vector<ControlBreakdown> controls(n);
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * config.dt;

        if (retess_every > 0 && k == next_retessellation) {
            LloydParams p = lloyd;
            p.rng_seed = lloyd.rng_seed + k;
            barrier.base_targets = run_lloyd(barrier.local_region(), p).seeds;
            std::vector<Vec3> current(n);
            for (std::size_t i = 0; i < n; ++i) current[i] = states[i].p;
            assignment = assign_targets(current, barrier_targets_at(barrier, t), config.assignment);
            next_retessellation += retess_every;
        }

        for (std::size_t o = 0; o < config.obstacles.size(); ++o) {
            views[o] = obstacle_view_at(config.obstacles[o], t);
            log.obstacles.push_back({t, views[o].id, views[o].center, views[o].radius});
        }
        const std::vector<Vec3> targets = barrier_targets_at(barrier, t);

        // Every controller reads the same snapshot.
        for (std::size_t i = 0; i < n; ++i)
            controls[i] = agent_control(i, states, targets[assignment[i]], views, config);

        for (std::size_t i = 0; i < n; ++i) {
            const ControlBreakdown& c = controls[i];
            log.rows.push_back({t, static_cast<int>(i), states[i].p, states[i].v, c.u_f, c.u_c, c.u_o,
                                c.u_total, static_cast<int>(c.detected_obstacles.size()),
                                static_cast<int>(c.active_neighbors.size())});
            log.center_penetrations += c.penetrations;
            for (const auto& b : config.buildings)
                if (b.contains(states[i].p)) ++log.building_penetrations;
        }
        if (k == steps) break;

        for (std::size_t i = 0; i < n; ++i) {
            states[i] = integrate_step(states[i], controls[i].u_total, config.dt);
            if (!is_finite(states[i].p) || !inside_bounds(states[i].p, config)) {
                std::ostringstream msg;
                msg << "divergence: agent " << i << " left the world bounds at t = "
                    << static_cast<double>(k + 1) * config.dt;
                throw DivergenceError(msg.str());
            }
        }
    }
    log.base_targets = barrier.base_targets;
    log.assignment = assignment;
    return log;
}

std::pair<double, double> corridor_window(const TrajectoryLog& log, const SimConfig& config) {
    const std::size_t steps = log.steps();
    if (steps == 0) return {0.0, 0.0};
    const double t_end = log.at(steps - 1, 0).t;
    if (config.buildings.empty() && config.obstacles.empty()) return {0.0, t_end};

    double x_lo = kInf, x_hi = -kInf;
    for (const auto& b : config.buildings) {
        x_lo = std::min(x_lo, b.lo.x);
        x_hi = std::max(x_hi, b.hi.x);
    }
    for (const auto& o : config.obstacles) {
        x_lo = std::min(x_lo, o.center.x - o.radius);
        x_hi = std::max(x_hi, o.center.x + o.radius);
    }
    double start = kInf, end = -kInf;
    for (std::size_t k = 0; k < steps; ++k) {
        double mean_x = 0.0;
        for (int i = 0; i < log.agents; ++i) mean_x += log.at(k, i).p.x;
        mean_x /= log.agents;
        if (mean_x >= x_lo && mean_x <= x_hi) {
            start = std::min(start, log.at(k, 0).t);
            end = std::max(end, log.at(k, 0).t);
        }
    }
    if (start > end) return {0.0, 0.0};
    return {start, end};
}

void attach_formation(TrajectoryLog& log, const SimConfig& config) {
    Barrier barrier = config.barrier;
    barrier.base_targets = run_lloyd(barrier.local_region(), config.effective_lloyd()).seeds;
    std::vector<Vec3> start(static_cast<std::size_t>(log.agents));
    for (int i = 0; i < log.agents && log.steps() > 0; ++i) start[static_cast<std::size_t>(i)] = log.at(0, i).p;
    log.base_targets = barrier.base_targets;
    if (start.size() == barrier.base_targets.size())
        log.assignment = assign_targets(start, barrier_targets_at(barrier, 0.0), config.assignment);
}

Metrics compute_metrics(const TrajectoryLog& log, const SimConfig& config) {
    Metrics m;
    const std::size_t steps = log.steps();
    const auto n = static_cast<std::size_t>(log.agents);
    m.min_pairwise_distance = kInf;
    m.min_obstacle_clearance = kInf;
    m.min_building_clearance = kInf;
    if (steps == 0) return m;

    const double r_s = config.detection.r_s;
    std::vector<char> inside(n * n, 0);
    const auto [w0, w1] = corridor_window(log, config);
    m.corridor_start = w0;
    m.corridor_end = w1;

    for (std::size_t k = 0; k < steps; ++k) {
        const double t = log.at(k, 0).t;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3& p = log.at(k, static_cast<int>(i)).p;
            for (std::size_t j = i + 1; j < n; ++j) {
                const double d = distance(p, log.at(k, static_cast<int>(j)).p);
                m.min_pairwise_distance = std::min(m.min_pairwise_distance, d);
                const bool now = d < r_s;
                if (now && !inside[i * n + j]) ++m.safety_band_entries;
                inside[i * n + j] = now;
            }
            for (const auto& o : config.obstacles) {
                const double gap = distance(p, obstacle_center_at(o, t)) - o.radius;
                if (gap <= 0.0) ++m.obstacle_penetrations;
                m.min_obstacle_clearance = std::min(m.min_obstacle_clearance, std::max(gap, 0.0));
            }
            for (const auto& b : config.buildings) {
                const double gap = distance_to_box(p, b);
                if (gap <= 0.0) ++m.building_penetrations;
                m.min_building_clearance = std::min(m.min_building_clearance, gap);
            }
            if (t >= w0 && t <= w1) {
                const double altitude = config.barrier.altitude + config.barrier.velocity.z * t;
                m.max_out_of_plane = std::max(m.max_out_of_plane, std::abs(p.z - altitude));
            }
        }
    }

    const double t_final = log.at(steps - 1, 0).t;
    if (!log.base_targets.empty() && log.assignment.size() == n) {
        Barrier b = config.barrier;
        b.base_targets = log.base_targets;
        const auto targets = barrier_targets_at(b, t_final);
        double sq = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            sq += norm2(log.at(steps - 1, static_cast<int>(i)).p - targets[log.assignment[i]]);
        m.final_rms_formation_error = std::sqrt(sq / static_cast<double>(n));
    }

    double x0 = 0.0, x1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x0 += log.at(0, static_cast<int>(i)).p.x;
        x1 += log.at(steps - 1, static_cast<int>(i)).p.x;
    }
    m.flock_x_progress = (x1 - x0) / static_cast<double>(n);
    return m;
}

namespace {

void put(std::ostream& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
}

void put(std::ostream& out, const Vec3& v) {
    put(out, v.x);
    out << ',';
    put(out, v.y);
    out << ',';
    put(out, v.z);
}

constexpr const char* kTrajectoryHeader =
    "t,agent_id,px,py,pz,vx,vy,vz,ufx,ufy,ufz,ucx,ucy,ucz,uox,uoy,uoz,"
    "n_detected_obstacles,n_active_neighbors";

}  // namespace

void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out) {
    out << kTrajectoryHeader << '\n';
    for (const auto& r : log.rows) {
        put(out, r.t);
        out << ',' << r.agent << ',';
        put(out, r.p);
        out << ',';
        put(out, r.v);
        out << ',';
        put(out, r.u_f);
        out << ',';
        put(out, r.u_c);
        out << ',';
        put(out, r.u_o);
        out << ',' << r.detected_obstacles << ',' << r.active_neighbors << '\n';
    }
}

void write_obstacles_csv(const TrajectoryLog& log, std::ostream& out) {
    out << "t,obstacle_id,ox,oy,oz,radius\n";
    for (const auto& r : log.obstacles) {
        put(out, r.t);
        out << ',' << r.id << ',';
        put(out, r.center);
        out << ',';
        put(out, r.radius);
        out << '\n';
    }
}

TrajectoryLog read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("trajectory csv: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTrajectoryHeader) throw std::runtime_error("trajectory csv: unexpected header");

    TrajectoryLog log;
    int max_agent = -1;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> f;
        f.reserve(19);
        const char* p = line.data();
        const char* end = p + line.size();
        while (p <= end) {
            double v = 0.0;
            const auto res = std::from_chars(p, end, v);
            if (res.ec != std::errc{})
                throw std::runtime_error("trajectory csv: bad number on line " + std::to_string(line_no));
            f.push_back(v);
            p = res.ptr;
            if (p == end) break;
            if (*p != ',') throw std::runtime_error("trajectory csv: bad separator on line " + std::to_string(line_no));
            ++p;
        }
        if (f.size() != 19)
            throw std::runtime_error("trajectory csv: expected 19 fields on line " + std::to_string(line_no));
        AgentRow r;
        r.t = f[0];
        r.agent = static_cast<int>(f[1]);
        r.p = {f[2], f[3], f[4]};
        r.v = {f[5], f[6], f[7]};
        r.u_f = {f[8], f[9], f[10]};
        r.u_c = {f[11], f[12], f[13]};
        r.u_o = {f[14], f[15], f[16]};
        r.u_total = r.u_f + r.u_c + r.u_o;
        r.detected_obstacles = static_cast<int>(f[17]);
        r.active_neighbors = static_cast<int>(f[18]);
        if (r.agent < 0) throw std::runtime_error("trajectory csv: negative agent id on line " + std::to_string(line_no));
        max_agent = std::max(max_agent, r.agent);
        log.rows.push_back(r);
    }
    log.agents = max_agent + 1;
    if (log.agents > 0 && log.rows.size() % static_cast<std::size_t>(log.agents) != 0)
        throw std::runtime_error("trajectory csv: row count is not a multiple of the agent count");
    for (std::size_t k = 0; k < log.rows.size(); ++k)
        if (log.rows[k].agent != static_cast<int>(k % static_cast<std::size_t>(log.agents)))
            throw std::runtime_error("trajectory csv: rows are not in step/agent order");
    return log;
}

std::string metrics_json(const Metrics& m) {
    // Infinite distances (no pair, no obstacle) serialise as null.
    auto finite_or_null = [](double v) -> nlohmann::ordered_json {
        return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
    };
    nlohmann::ordered_json j;
    j["min_pairwise_distance"] = finite_or_null(m.min_pairwise_distance);
    j["min_obstacle_clearance"] = finite_or_null(m.min_obstacle_clearance);
    j["obstacle_penetrations"] = m.obstacle_penetrations;
    j["min_building_clearance"] = finite_or_null(m.min_building_clearance);
    j["building_penetrations"] = m.building_penetrations;
    j["safety_band_entries"] = m.safety_band_entries;
    j["final_rms_formation_error"] = m.final_rms_formation_error;
    j["max_out_of_plane"] = m.max_out_of_plane;
    j["flock_x_progress"] = m.flock_x_progress;
    j["corridor_start"] = m.corridor_start;
    j["corridor_end"] = m.corridor_end;
    return j.dump(2) + "\n";
}

}  // namespace swarm
