#include "doctest.h"

#include <random>
#include <stdexcept>
#include <vector>

#include "swarm/control.hpp"

using namespace swarm;

namespace {

const DetectionParams kTable{2.0, 1.0, kPi / 3};

double up_isotropic(const Vec3& x, double r_a) {
    const double s = norm(x) - r_a;
    return 0.5 * s * s;
}

Vec3 orthogonal_part(const Vec3& f, const Vec3& x) { return f - x * (dot(f, x) / norm2(x)); }

}  // namespace

TEST_CASE("gain defaults and validation") {
    Gains g;
    CHECK(g.formation_p.diag == Vec3{3, 3, 3});
    CHECK(g.formation_v.diag == Vec3{5, 5, 5});
    CHECK(g.obstacle_scale.diag == Vec3{0.1, 0.5, 0.1});
    CHECK(g.rotation == 0.5);
    CHECK(g.obstacle_repulsion.diag == Vec3{5, 5, 5});
    CHECK(g.obstacle_damping.diag == Vec3{1, 1, 1});
    CHECK_NOTHROW(g.validate());

    g.obstacle_scale.diag.y = 0.0;
    CHECK_THROWS_WITH_AS(g.validate(), doctest::Contains("k_v"), std::invalid_argument);
    g = Gains{};
    g.rotation = -1.0;
    CHECK_THROWS_WITH_AS(g.validate(), doctest::Contains("k_r"), std::invalid_argument);
    g = Gains{};
    g.collision_damping.diag.x = -2.0;
    CHECK_THROWS_WITH_AS(g.validate(), doctest::Contains("k_c2"), std::invalid_argument);
}

TEST_CASE("heading falls back when hovering") {
    UavState s;
    s.v = {0, 2, 0};
    CHECK(s.heading() == doctest::Approx(kPi / 2));
    s.v = {0, 0, 3};
    s.last_heading = 1.25;
    CHECK(s.heading() == 1.25);
}

TEST_CASE("formation_accel examples") {
    const Gains g;
    CHECK(formation_accel({1, 2, 3}, {1, 0, 0}, {1, 2, 3}, {1, 0, 0}, g) == Vec3{0, 0, 0});
    CHECK(formation_accel({1, 0, 0}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}, g) == Vec3{-3, 0, 0});
    CHECK(formation_accel({0, 0, 0}, {1, 1, 0}, {0, 0, 0}, {1, 0, 0}, g) == Vec3{0, -5, 0});
}

TEST_CASE("collision_accel examples") {
    const Gains g;
    std::vector<UavState> s(2);
    s[0].p = {0, 0, 0};

    SUBCASE("nobody in range") {
        s[1].p = {5, 0, 0};
        const auto r = collision_accel(0, s, g, kTable, kTable.r_d);
        CHECK(r.accel == Vec3{0, 0, 0});
        CHECK(r.active.empty());
    }
    SUBCASE("spring magnitude at 1.1 m") {
        s[1].p = {1.1, 0, 0};
        const auto r = collision_accel(0, s, g, kTable, kTable.r_d);
        CHECK(r.accel.x == doctest::Approx(-100.0));
        CHECK(r.accel.y == 0.0);
        CHECK(r.active == std::vector<std::size_t>{1});
    }
    SUBCASE("clamped near and inside the safety range") {
        for (double d : {1.005, 1.0, 0.6}) {
            s[1].p = {0, d, 0};
            const auto r = collision_accel(0, s, g, kTable, kTable.r_d);
            CHECK(r.accel.y == doctest::Approx(-1.0 / (kCollisionClamp * kCollisionClamp)));
        }
    }
    SUBCASE("damping follows relative velocity") {
        s[1].p = {1.5, 0, 0};
        s[1].v = {0, 0.5, 0};
        const auto r = collision_accel(0, s, g, kTable, kTable.r_d);
        CHECK(r.accel.x == doctest::Approx(-4.0));
        CHECK(r.accel.y == doctest::Approx(0.5));
    }
    SUBCASE("literal trigger fires only inside r_s") {
        s[1].p = {1.5, 0, 0};
        CHECK(collision_accel(0, s, g, kTable, kTable.r_d, CollisionTrigger::Literal).active.empty());
        s[1].p = {0.5, 0, 0};
        const auto r = collision_accel(0, s, g, kTable, kTable.r_d, CollisionTrigger::Literal);
        CHECK(r.accel.x == doctest::Approx(-4.0));
    }
}

TEST_CASE("collision spring terms are antisymmetric") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    const Gains g;
    for (int k = 0; k < 500; ++k) {
        std::vector<UavState> s(2);
        s[0].p = {u(rng), u(rng), u(rng)};
        s[1].p = {u(rng), u(rng), u(rng)};
        s[0].v = s[1].v = {u(rng), u(rng), u(rng)};
        const auto a = collision_accel(0, s, g, kTable, kTable.r_d);
        const auto b = collision_accel(1, s, g, kTable, kTable.r_d);
        CHECK(a.active.size() == b.active.size());
        CHECK(norm(a.accel + b.accel) <= 1e-12 * (1.0 + norm(a.accel)));
    }
}

TEST_CASE("obstacle_potentials") {
    Gains g;
    const ObstacleView o{{0, 0, 0}, 1.0, 1};
    CHECK(obstacle_potentials({1, 1, 0}, o, g, kTable, false) == std::pair<double, double>{0.0, 0.0});

    g.obstacle_scale = DiagGain::uniform(0.5);
    const auto [up, ur] = obstacle_potentials({6, 0, 0}, o, g, kTable, true);
    CHECK(up == 0.0);
    CHECK(ur == doctest::Approx(0.5 * 0.5 * 36));

    // U_r does not depend on the rotation angle.
    for (double d : {1.0, 1.2, 1.5, 1.9, 2.5}) {
        const Vec3 p{d / std::sqrt(3.0), d / std::sqrt(3.0), d / std::sqrt(3.0)};
        CHECK(obstacle_potentials(p, o, g, kTable, true).second == doctest::Approx(0.5 * g.rotation * d * d));
    }
}

TEST_CASE("translational gradient against finite differences with identity scale") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const double h = 1e-6;
    const double r_a = 3.0;
    for (int k = 0; k < 100; ++k) {
        Vec3 x{u(rng), u(rng), u(rng)};
        if (norm(x) < 0.5 || std::abs(norm(x) - r_a) < 0.05) continue;
        const Vec3 g = translational_gradient(x, DiagGain::uniform(1.0), r_a);
        for (int a = 0; a < 3; ++a) {
            Vec3 xp = x, xm = x;
            xp[a] += h;
            xm[a] -= h;
            const double fd = (up_isotropic(xp, r_a) - up_isotropic(xm, r_a)) / (2 * h);
            CHECK(std::abs(fd - g[a]) <= 1e-5 * std::max(std::abs(g[a]), norm(g)));
        }
    }
}

TEST_CASE("translational gradient keeps the published scaling") {
    const DiagGain k{{0.1, 0.5, 0.1}};
    const Vec3 x{-1.5, 0.0, 0.0};
    const Vec3 g = translational_gradient(x, k, 3.0);
    CHECK(g.x == doctest::Approx(2.85));
    CHECK(g.y == 0.0);
    CHECK(g.z == 0.0);

    const Vec3 y{1.0, 2.0, 0.0};
    const Vec3 ky{0.1, 1.0, 0.0};
    const Vec3 expected = ky * ((norm(ky) - 3.0) / norm(ky));
    CHECK(distance(translational_gradient(y, k, 3.0), expected) < 1e-15);

    CHECK(translational_gradient({0, 0, 0}, k, 3.0) == Vec3{0, 0, -3.0});
}

TEST_CASE("rotational force properties") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_real_distribution<double> ang(1e-3, kPi / 2 - 1e-3);
    for (int k = 0; k < 1000; ++k) {
        const Vec3 x{u(rng), u(rng), u(rng)};
        const double a = ang(rng);
        for (Maneuver m : {Maneuver::Planar, Maneuver::Spatial}) {
            const Vec3 f = rotational_force(x, a, 0.5, m);
            CHECK(std::abs(norm(f) - 0.5 * norm(x)) < 1e-9);
            CHECK(norm(orthogonal_part(f, x)) > 0.0);
            const Vec3 f0 = rotational_force(x, 0.0, 0.5, m);
            CHECK(f0 == x * 0.5);
        }
    }
}

TEST_CASE("planar rotation acts on the xy components only") {
    const Vec3 f = rotational_force({1, 0, 0.3}, kPi / 2, 2.0, Maneuver::Planar);
    CHECK(std::abs(f.x) < 1e-15);
    CHECK(f.y == doctest::Approx(2.0));
    CHECK(f.z == doctest::Approx(0.6));
}

TEST_CASE("obstacle_accel examples") {
    const Gains g;
    UavState s;
    s.p = {0, 0, 5};

    SUBCASE("no detection gives exactly zero") {
        s.v = {1, 0, 0};
        const ObstacleView behind{{-1.5, 0, 5}, 1.0, 1};
        const auto r = obstacle_accel(s, std::span(&behind, 1), Maneuver::Planar, g, kTable);
        CHECK(r.accel == Vec3{0, 0, 0});
        CHECK(r.detected.empty());
        const auto e = obstacle_accel(s, std::span<const ObstacleView>{}, Maneuver::Spatial, g, kTable);
        CHECK(e.accel == Vec3{0, 0, 0});
    }
    SUBCASE("obstacle ahead at 1.5 m") {
        const ObstacleView ahead{{1.5, 0, 5}, 1.0, 7};
        // -k_o1 * (2.85, 0, 0) minus k_r R(pi/4) (-1.5, 0, 0).
        const double c = std::cos(kPi / 4);
        const auto planar = obstacle_accel(s, std::span(&ahead, 1), Maneuver::Planar, g, kTable);
        REQUIRE(planar.detected == std::vector<int>{7});
        CHECK(planar.accel.x == doctest::Approx(-14.25 + 0.75 * c));
        CHECK(planar.accel.y == doctest::Approx(0.75 * c));
        CHECK(planar.accel.z == 0.0);
        // R_y(a) R_z(a) e_x = (c^2, s, -s c).
        const auto spatial = obstacle_accel(s, std::span(&ahead, 1), Maneuver::Spatial, g, kTable);
        REQUIRE(spatial.detected == std::vector<int>{7});
        CHECK(spatial.accel.x == doctest::Approx(-14.25 + 0.75 * c * c));
        CHECK(spatial.accel.y == doctest::Approx(0.75 * c));
        CHECK(spatial.accel.z == doctest::Approx(-0.75 * c * c));
    }
    SUBCASE("detected beyond r_d gives radial rotation term") {
        const ObstacleView ahead{{2.5, 0, 5}, 1.0, 1};
        const auto r = obstacle_accel(s, std::span(&ahead, 1), Maneuver::Spatial, g, kTable);
        REQUIRE(r.detected.size() == 1);
        const Vec3 x{-2.5, 0, 0};
        const Vec3 expected = -(g.obstacle_repulsion * translational_gradient(x, g.obstacle_scale, 3.0)) - x * 0.5;
        CHECK(distance(r.accel, expected) < 1e-12);
    }
    SUBCASE("damping only while something is detected") {
        s.v = {0.5, 0.2, 0.1};
        const ObstacleView ahead{{1.8, 0.3, 5}, 1.0, 1};
        const Vec3 x = s.p - ahead.center;
        const double alpha = avoidance_angle(norm(x), 1.0, 2.0);
        const auto r = obstacle_accel(s, std::span(&ahead, 1), Maneuver::Spatial, g, kTable);
        const Vec3 expected = -(g.obstacle_repulsion * translational_gradient(x, g.obstacle_scale, 3.0)) -
                              rotational_force(x, alpha, 0.5, Maneuver::Spatial) - s.v;
        CHECK(distance(r.accel, expected) < 1e-12);
    }
    SUBCASE("planar mode zeroes the vertical component") {
        s.v = {1, 0, 0};
        const ObstacleView above{{1.5, 0.2, 5.8}, 1.0, 1};
        const auto planar = obstacle_accel(s, std::span(&above, 1), Maneuver::Planar, g, kTable);
        REQUIRE(planar.detected.size() == 1);
        CHECK(planar.accel.z == 0.0);
        const auto spatial = obstacle_accel(s, std::span(&above, 1), Maneuver::Spatial, g, kTable);
        REQUIRE(spatial.detected.size() == 1);
        CHECK(spatial.accel.z < 0.0);
    }
    SUBCASE("agent at a centre pushes along +z and counts a penetration") {
        const ObstacleView here{{0, 0, 5}, 1.0, 3};
        const auto r = obstacle_accel(s, std::span(&here, 1), Maneuver::Spatial, g, kTable);
        CHECK(r.penetrations == 1);
        CHECK(r.accel.z == doctest::Approx(15.0));
    }
}

TEST_CASE("total_accel superposition") {
    const auto b = total_accel({1, 0, 0}, {0, 1, 0}, {0, 0, 1});
    CHECK(b.u_total == Vec3{1, 1, 1});
    CHECK(total_accel({1, 2, 3}, {}, {}).u_total == Vec3{1, 2, 3});

    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int k = 0; k < 1000; ++k) {
        const Vec3 f{u(rng), u(rng), u(rng)}, c{u(rng), u(rng), u(rng)}, o{u(rng), u(rng), u(rng)};
        const auto r = total_accel(f, c, o);
        CHECK(norm(r.u_total - (f + c + o)) <= 1e-12);
        CHECK(r.u_f == f);
        CHECK(r.u_c == c);
        CHECK(r.u_o == o);
    }
}
