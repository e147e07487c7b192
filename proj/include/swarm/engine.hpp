#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarm/control.hpp"
#include "swarm/cvt.hpp"
#include "swarm/detect.hpp"
#include "swarm/world.hpp"

namespace swarm {

/// Raised when the simulation produces non-finite inputs or an agent leaves
/// the world bounds.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct InitDistribution {
    Vec3 mean{0.0, 0.0, 0.0};
    Vec3 variance{1.0, 1.0, 0.0};  // diagonal covariance
    std::uint64_t seed{1};
    // Draws closer than this to an already placed agent are rejected and
    // redrawn. 0 keeps the raw Gaussian sample.
    double min_separation{0.0};
    bool operator==(const InitDistribution&) const = default;
};

struct SimConfig {
    std::string name{"scenario"};
    double dt{0.1};
    double duration{10.0};
    Maneuver mode{Maneuver::Planar};
    int agents{1};
    InitDistribution init;

    Gains gains;
    DetectionParams detection;
    double neighbor_radius{2.0};
    CollisionTrigger collision_trigger{CollisionTrigger::Band};
    VerticalTest vertical_test{VerticalTest::Conjunctive};

    Barrier barrier;
    LloydParams lloyd{.n = 0, .samples = 0};  // n and samples derive from agents
    AssignmentMode assignment{AssignmentMode::Optimal};
    double retessellate_period{0.0};  // 0 disables periodic re-tessellation

    std::vector<Obstacle> obstacles;
    std::vector<Building> buildings;

    Vec3 bounds_lo{-1000.0, -1000.0, -1000.0};
    Vec3 bounds_hi{1000.0, 1000.0, 1000.0};

    void validate() const;  // throws std::invalid_argument naming the constraint
    std::size_t step_count() const;  // number of integration steps
    LloydParams effective_lloyd() const;
    bool operator==(const SimConfig&) const = default;
};

struct AgentRow {
    double t{0.0};
    int agent{0};
    Vec3 p;
    Vec3 v;
    Vec3 u_f;
    Vec3 u_c;
    Vec3 u_o;
    Vec3 u_total;
    int detected_obstacles{0};
    int active_neighbors{0};
};

struct ObstacleRow {
    double t{0.0};
    int id{0};
    Vec3 center;
    double radius{0.0};
};

struct TrajectoryLog {
    int agents{0};
    std::vector<AgentRow> rows;         // step-major, agent index order
    std::vector<ObstacleRow> obstacles;  // step-major
    std::vector<Vec3> base_targets;      // barrier-local CVT seeds
    std::vector<std::size_t> assignment; // agent -> target index
    int building_penetrations{0};
    int center_penetrations{0};
    int cvt_iterations{0};
    bool cvt_converged{false};

    std::size_t steps() const { return agents > 0 ? rows.size() / static_cast<std::size_t>(agents) : 0; }
    const AgentRow& at(std::size_t step, int agent) const {
        return rows[step * static_cast<std::size_t>(agents) + static_cast<std::size_t>(agent)];
    }
};

/// Semi-implicit Euler: v' = v + u dt, p' = p + v' dt. Throws
/// DivergenceError for non-finite u.
UavState integrate_step(const UavState& state, const Vec3& u, double dt);

/// Everything one agent's controller produces for a single world snapshot.
ControlBreakdown agent_control(std::size_t i, std::span<const UavState> states, const Vec3& target,
                               std::span<const ObstacleView> obstacles, const SimConfig& config);

std::vector<Vec3> sample_initial_positions(const SimConfig& config);

TrajectoryLog run_scenario(const SimConfig& config);

struct Metrics {
    double min_pairwise_distance{0.0};
    double min_obstacle_clearance{0.0};
    int obstacle_penetrations{0};
    double min_building_clearance{0.0};
    int building_penetrations{0};
    int safety_band_entries{0};
    double final_rms_formation_error{0.0};
    double max_out_of_plane{0.0};
    double flock_x_progress{0.0};
    double corridor_start{0.0};
    double corridor_end{0.0};
};

/// Time window during which the flock mean x lies within the x-extent of the
/// buildings and obstacles. Covers the whole run when the world is empty.
std::pair<double, double> corridor_window(const TrajectoryLog& log, const SimConfig& config);

/// Recomputes the CVT targets and initial assignment that run_scenario used,
/// for logs read back from CSV. Periodic re-tessellation is not replayed.
void attach_formation(TrajectoryLog& log, const SimConfig& config);

Metrics compute_metrics(const TrajectoryLog& log, const SimConfig& config);

void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out);
void write_obstacles_csv(const TrajectoryLog& log, std::ostream& out);
/// Reads rows written by write_trajectory_csv. Throws std::runtime_error on
/// malformed input.
TrajectoryLog read_trajectory_csv(std::istream& in);
std::string metrics_json(const Metrics& m);

}  // namespace swarm
