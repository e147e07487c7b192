#include "swarm/cvt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace swarm {

Region Region::rectangle(double x0, double y0, double x1, double y1, double z) {
    return Region{{x0, y0, z}, {x1, y1, z}, 2};
}

Region Region::box(const Vec3& lo, const Vec3& hi) { return Region{lo, hi, 3}; }

void Region::validate() const {
    if (dims != 2 && dims != 3) throw std::invalid_argument("region: dims must be 2 or 3");
    for (int a = 0; a < dims; ++a)
        if (!(lo[a] < hi[a]))
            throw std::invalid_argument("region: min corner must be below max corner on every axis");
}

double Region::measure() const {
    double m = (hi.x - lo.x) * (hi.y - lo.y);
    if (dims == 3) m *= hi.z - lo.z;
    return m;
}

double Region::diameter() const {
    Vec3 d = hi - lo;
    if (dims == 2) d.z = 0.0;
    return norm(d);
}

bool Region::contains(const Vec3& p, double tol) const {
    for (int a = 0; a < dims; ++a)
        if (p[a] < lo[a] - tol || p[a] > hi[a] + tol) return false;
    return dims == 3 || std::abs(p.z - lo.z) <= tol;
}

Vec3 Region::clamp(const Vec3& p) const {
    Vec3 q = p;
    for (int a = 0; a < dims; ++a) q[a] = std::clamp(p[a], lo[a], hi[a]);
    if (dims == 2) q.z = lo.z;
    return q;
}

Vec3 Region::sample(Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vec3 p;
    p.x = lo.x + u(rng) * (hi.x - lo.x);
    p.y = lo.y + u(rng) * (hi.y - lo.y);
    p.z = dims == 3 ? lo.z + u(rng) * (hi.z - lo.z) : lo.z;
    return p;
}

LloydParams LloydParams::defaults(int n) {
    LloydParams p;
    p.n = n;
    p.samples = 100 * n;
    return p;
}

void LloydParams::validate() const {
    if (n < 1) throw std::invalid_argument("lloyd: N must be a positive integer");
    if (samples < n) throw std::invalid_argument("lloyd: samples per iteration must be >= N");
    if (max_iter < 1) throw std::invalid_argument("lloyd: max_iter must be positive");
    if (!(move_tol >= 0.0)) throw std::invalid_argument("lloyd: move_tol must be non-negative");
    if (std::abs(a1 + a2 - 1.0) > 1e-12) throw std::invalid_argument("lloyd: a1 + a2 must equal 1");
    if (std::abs(b1 + b2 - 1.0) > 1e-12) throw std::invalid_argument("lloyd: b1 + b2 must equal 1");
    if (!(a2 > 0.0) || !(b2 > 0.0)) throw std::invalid_argument("lloyd: a2 and b2 must be positive");
}

std::size_t nearest_seed(std::span<const Vec3> seeds, const Vec3& p) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const double d = norm2(p - seeds[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

double lloyd_iterate(std::vector<CvtCell>& cells, const Region& region,
                     const LloydParams& params, Rng& rng) {
    const std::size_t n = cells.size();
    std::vector<Vec3> seeds(n);
    for (std::size_t i = 0; i < n; ++i) seeds[i] = cells[i].seed;

    std::vector<Vec3> sums(n);
    std::vector<std::size_t> counts(n, 0);
    for (int s = 0; s < params.samples; ++s) {
        const Vec3 y = region.sample(rng);
        const std::size_t k = nearest_seed(seeds, y);
        sums[k] += y;
        ++counts[k];
    }

    const double unit_mass = region.measure() / params.samples;
    double max_move = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        CvtCell& c = cells[i];
        c.mass = static_cast<double>(counts[i]) * unit_mass;
        if (counts[i] == 0) {
            c.sample_mean.reset();
            continue;
        }
        const Vec3 mean = sums[i] / static_cast<double>(counts[i]);
        c.sample_mean = mean;
        c.centroid = mean;
        const double j = c.counter;
        const double keep = (params.a1 * j + params.b1) / (j + 1.0);
        const double pull = (params.a2 * j + params.b2) / (j + 1.0);
        const Vec3 next = region.clamp(c.seed * keep + mean * pull);
        max_move = std::max(max_move, distance(next, c.seed));
        c.seed = next;
        ++c.counter;
    }
    return max_move;
}

LloydResult run_lloyd(const Region& region, const LloydParams& params,
                      const LloydObserver& observer) {
    region.validate();
    params.validate();

    Rng rng(params.rng_seed);
    std::vector<CvtCell> cells(static_cast<std::size_t>(params.n));
    for (auto& c : cells) {
        c.seed = region.sample(rng);
        c.centroid = c.seed;
    }
    if (observer) observer(0, cells);

    LloydResult result;
    for (int it = 1; it <= params.max_iter; ++it) {
        result.last_move = lloyd_iterate(cells, region, params, rng);
        result.iterations = it;
        if (observer) observer(it, cells);
        if (result.last_move < params.move_tol) {
            result.converged = true;
            break;
        }
    }
    result.seeds.reserve(cells.size());
    for (const auto& c : cells) result.seeds.push_back(c.seed);
    return result;
}

double distortion_energy(std::span<const Vec3> seeds, std::span<const Vec3> samples) {
    if (samples.empty() || seeds.empty()) return 0.0;
    double total = 0.0;
    for (const auto& y : samples) total += norm2(y - seeds[nearest_seed(seeds, y)]);
    return total / static_cast<double>(samples.size());
}

std::vector<Vec3> sample_region(const Region& region, std::size_t count, Rng& rng) {
    std::vector<Vec3> out(count);
    for (auto& p : out) p = region.sample(rng);
    return out;
}

namespace {

// Shortest augmenting path Hungarian method on an n x n cost matrix.
std::vector<std::size_t> hungarian(const std::vector<double>& cost, std::size_t n) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n);
    for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

std::vector<std::size_t> greedy(const std::vector<double>& cost, std::size_t n) {
    std::vector<std::size_t> order(n * n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Stable sort keeps (row, col) lexicographic order among equal costs.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cost[a] < cost[b]; });
    std::vector<std::size_t> row_to_col(n, n);
    std::vector<char> col_used(n, 0);
    std::size_t assigned = 0;
    for (std::size_t k : order) {
        const std::size_t r = k / n, c = k % n;
        if (row_to_col[r] != n || col_used[c]) continue;
        row_to_col[r] = c;
        col_used[c] = 1;
        if (++assigned == n) break;
    }
    return row_to_col;
}

}  // namespace

std::vector<std::size_t> assign_targets(std::span<const Vec3> uav_positions,
                                        std::span<const Vec3> seeds, AssignmentMode mode) {
    if (uav_positions.size() != seeds.size())
        throw std::invalid_argument("assign_targets: " + std::to_string(uav_positions.size()) +
                                    " UAVs but " + std::to_string(seeds.size()) + " targets");
    const std::size_t n = seeds.size();
    if (n == 0) return {};
    std::vector<double> cost(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = norm2(uav_positions[i] - seeds[j]);
    return mode == AssignmentMode::Optimal ? hungarian(cost, n) : greedy(cost, n);
}

double assignment_cost(std::span<const Vec3> uav_positions, std::span<const Vec3> seeds,
                       std::span<const std::size_t> assignment) {
    double total = 0.0;
    for (std::size_t i = 0; i < assignment.size(); ++i)
        total += norm2(uav_positions[i] - seeds[assignment[i]]);
    return total;
}

}  // namespace swarm
