#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "swarm/cvt.hpp"
#include "swarm/plot.hpp"
#include "swarm/scenario.hpp"

namespace swarm::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kMissingFile = 2,
    kSchemaViolation = 3,
    kDivergence = 4,
    kParseError = 5,
    kIoError = 6,
};

struct RunOptions {
    std::filesystem::path scenario;
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<Maneuver> mode;
};

/// Writes trajectory.csv, obstacles.csv, metrics.json and manifest.json.
int cmd_run(const RunOptions& options);

struct CvtOptions {
    double x0{0.0}, y0{0.0}, x1{1.0}, y1{1.0};
    double z{0.0};
    int n{1};
    std::optional<int> samples;
    LloydParams params;
    std::size_t energy_samples{10000};
    std::filesystem::path out;
    std::filesystem::path energy_out;  // empty -> <out stem>_energy.csv
};

/// Writes the final seeds (index, x, y, z) and a per-iteration distortion
/// energy trace (iteration, energy).
int cmd_cvt(const CvtOptions& options);

struct MetricsOptions {
    std::filesystem::path scenario;
    std::filesystem::path trajectory;
    std::filesystem::path out;  // empty -> stdout
};

int cmd_metrics(const MetricsOptions& options);

struct PlotCommandOptions {
    std::filesystem::path trajectory;
    std::filesystem::path out;
    PlotView view{PlotView::Top};
    int agent{0};
    std::filesystem::path scenario;  // optional, adds obstacles/buildings/r_s
};

int cmd_plot(const PlotCommandOptions& options);

/// Full command-line entry point.
int main(int argc, char** argv);

}  // namespace swarm::cli
