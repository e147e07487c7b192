#pragma once

#include <string>
#include <vector>

#include "swarm/engine.hpp"

namespace swarm {

enum class PlotView { Top, Projection, Separation };

struct PlotOptions {
    int agent{0};         // reference agent for the separation view
    double safety_range{1.0};
    std::vector<ObstacleRow> obstacles;
    std::vector<Building> buildings;
};

/// Static SVG of a trajectory log. Top: x-y paths with obstacles and
/// buildings. Projection: isometric 3D view. Separation: distance from the
/// reference agent to every other agent over time with the safety range
/// dashed.
std::string render_svg(const TrajectoryLog& log, PlotView view, const PlotOptions& options = {});

/// Obstacle rows for every distinct time in the log.
std::vector<ObstacleRow> obstacle_rows_for(const TrajectoryLog& log, const std::vector<Obstacle>& obstacles);

}  // namespace swarm
