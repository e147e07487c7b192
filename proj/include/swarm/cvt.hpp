#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "swarm/geom.hpp"

namespace swarm {

using Rng = std::mt19937_64;

/// Axis-aligned sampling region. A 2D region is a rectangle in the plane
/// z = lo.z; a 3D region is a box. Density is uniform.
struct Region {
    Vec3 lo;
    Vec3 hi;
    int dims{2};

    static Region rectangle(double x0, double y0, double x1, double y1, double z);
    static Region box(const Vec3& lo, const Vec3& hi);

    void validate() const;
    double measure() const;   // area (2D) or volume (3D)
    double diameter() const;
    bool contains(const Vec3& p, double tol = 0.0) const;
    Vec3 clamp(const Vec3& p) const;
    Vec3 sample(Rng& rng) const;
};

struct LloydParams {
    int n{1};
    int samples{100};
    // Blending constants of the probabilistic update. The weight on the
    // sample mean is (a2*j + b2)/(j + 1): a full step at j = 1, then roughly
    // 2/j, levelling off at a2.
    double a1{0.995};
    double a2{0.005};
    double b1{-1.0};
    double b2{2.0};
    int max_iter{500};
    double move_tol{1e-3};
    std::uint64_t rng_seed{1};

    bool operator==(const LloydParams&) const = default;

    static LloydParams defaults(int n);
    void validate() const;  // throws std::invalid_argument
};

struct CvtCell {
    Vec3 seed;
    int counter{1};
    std::optional<Vec3> sample_mean;
    double mass{0.0};
    Vec3 centroid;
};

/// One probabilistic Lloyd step. Draws params.samples uniform points, bins
/// them by nearest seed (ties to the lowest index) and blends every
/// non-empty cell's seed toward its sample mean. Returns the largest seed
/// displacement.
double lloyd_iterate(std::vector<CvtCell>& cells, const Region& region,
                     const LloydParams& params, Rng& rng);

struct LloydResult {
    std::vector<Vec3> seeds;
    int iterations{0};
    bool converged{false};
    double last_move{0.0};
};

/// Called with the iteration index (0 = initial seeds) and the cells after
/// that iteration.
using LloydObserver = std::function<void(int, std::span<const CvtCell>)>;

LloydResult run_lloyd(const Region& region, const LloydParams& params,
                      const LloydObserver& observer = {});

/// Index of the seed nearest to p, lowest index on ties.
std::size_t nearest_seed(std::span<const Vec3> seeds, const Vec3& p);

/// Mean squared distance from each sample to its nearest seed.
double distortion_energy(std::span<const Vec3> seeds, std::span<const Vec3> samples);

std::vector<Vec3> sample_region(const Region& region, std::size_t count, Rng& rng);

enum class AssignmentMode { Optimal, Greedy };

/// Returns map[uav] = seed index, a bijection. Optimal mode minimises the
/// total squared distance; greedy mode repeatedly takes the closest free
/// (uav, seed) pair. Throws std::invalid_argument on length mismatch.
std::vector<std::size_t> assign_targets(std::span<const Vec3> uav_positions,
                                        std::span<const Vec3> seeds,
                                        AssignmentMode mode = AssignmentMode::Optimal);

double assignment_cost(std::span<const Vec3> uav_positions, std::span<const Vec3> seeds,
                       std::span<const std::size_t> assignment);

}  // namespace swarm
