#include "doctest.h"

#include <string>

#include "json.hpp"
#include "swarm/scenario.hpp"

using namespace swarm;
using nlohmann::json;

namespace {

const char* const kMinimal = R"({
  "schema_version": 1,
  "dt": 0.1,
  "duration": 10,
  "agents": {"count": 4},
  "barrier": {"origin": [0, 0], "size": [10, 8], "altitude": 5}
})";

json minimal() { return json::parse(kMinimal); }

std::string error_of(const json& doc) {
    try {
        parse_scenario(doc.dump());
    } catch (const ScenarioError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("minimal scenario takes defaults") {
    const SimConfig c = parse_scenario(kMinimal);
    CHECK(c.agents == 4);
    CHECK(c.mode == Maneuver::Planar);
    CHECK(c.detection.r_d == 2.0);
    CHECK(c.detection.r_s == 1.0);
    CHECK(c.detection.theta_fov == doctest::Approx(kPi / 3));
    CHECK(c.neighbor_radius == c.detection.r_d);
    CHECK(c.gains.formation_p == DiagGain::uniform(3.0));
    CHECK(c.vertical_test == VerticalTest::Conjunctive);
    CHECK(c.collision_trigger == CollisionTrigger::Band);
    CHECK(c.assignment == AssignmentMode::Optimal);
    CHECK(c.obstacles.empty());
    CHECK(c.barrier.altitude == 5.0);
}

TEST_CASE("shipped scenarios round-trip") {
    for (const char* name : {"case_a", "case_b"}) {
        CAPTURE(name);
        const SimConfig c = load_scenario(std::string(SWARM_SOURCE_DIR "/scenarios/") + name + ".json");
        CHECK(c.name == name);
        const std::string text = scenario_to_json(c);
        const SimConfig back = parse_scenario(text);
        CHECK(back == c);
        CHECK(scenario_to_json(back) == text);
    }
    const SimConfig a = load_scenario(SWARM_SOURCE_DIR "/scenarios/case_a.json");
    CHECK(a.mode == Maneuver::Planar);
    CHECK(a.obstacles.size() == 4);
    CHECK(a.obstacles[3].velocity == Vec3{0.2, 0.05, 0});
    CHECK(a.obstacles[3].activation_time == 42.0);
    CHECK(a.gains.obstacle_scale.diag == Vec3{0.1, 0.5, 0.1});
    CHECK(load_scenario(SWARM_SOURCE_DIR "/scenarios/case_b.json").mode == Maneuver::Spatial);
}

TEST_CASE("unknown keys are rejected with their path") {
    json doc = minimal();
    doc["agent"] = 3;
    CHECK(error_of(doc).find("unknown key 'agent'") != std::string::npos);

    doc = minimal();
    doc["agents"]["cout"] = 3;
    CHECK(error_of(doc).find("scenario.agents") != std::string::npos);

    doc = minimal();
    doc["obstacles"] = json::array({{{"center", {1, 2, 3}}, {"radius", 1}, {"speed", 2}}});
    CHECK(error_of(doc).find("obstacles[0]") != std::string::npos);
}

TEST_CASE("missing required keys") {
    for (const char* key : {"schema_version", "dt", "duration", "agents", "barrier"}) {
        CAPTURE(key);
        json doc = minimal();
        doc.erase(key);
        CHECK(error_of(doc).find(key) != std::string::npos);
    }
    json doc = minimal();
    doc["barrier"].erase("altitude");
    CHECK(error_of(doc).find("altitude") != std::string::npos);
}

TEST_CASE("constraint violations name the constraint") {
    json doc = minimal();
    doc["detection"] = {{"r_d", 1.0}, {"r_s", 1.0}};
    CHECK(error_of(doc).find("r_s < r_d") != std::string::npos);

    doc = minimal();
    doc["detection"] = {{"theta_fov", 1.0}, {"theta_fov_deg", 60}};
    CHECK(error_of(doc).find("only one of") != std::string::npos);

    doc = minimal();
    doc["schema_version"] = 2;
    CHECK(error_of(doc).find("schema_version") != std::string::npos);

    doc = minimal();
    doc["mode"] = "spatial";
    CHECK(error_of(doc).find("mode") != std::string::npos);

    doc = minimal();
    doc["dt"] = "fast";
    CHECK_FALSE(error_of(doc).empty());

    doc = minimal();
    doc["agents"]["count"] = 0;
    CHECK_FALSE(error_of(doc).empty());

    doc = minimal();
    doc["barrier"]["size"] = {10};
    CHECK_FALSE(error_of(doc).empty());

    CHECK_THROWS_AS(parse_scenario("{ not json"), ScenarioError);
}

TEST_CASE("field options") {
    json doc = minimal();
    doc["mode"] = "3d";
    doc["detection"] = {{"theta_fov_deg", 90}, {"vertical_test", "or"}, {"collision_trigger", "literal"},
                        {"neighbor_radius", 3.0}};
    doc["gains"] = {{"K_p", 2}, {"k_v", {0.1, 0.5, 0.1}}};
    doc["cvt"] = {{"assignment", "greedy"}, {"samples", 50}, {"seed", 9}};
    doc["buildings"] = json::array({{{"min", {1, 1, 0}}, {"max", {2, 2, 3}}}});
    const SimConfig c = parse_scenario(doc.dump());
    CHECK(c.mode == Maneuver::Spatial);
    CHECK(c.detection.theta_fov == doctest::Approx(kPi / 2));
    CHECK(c.vertical_test == VerticalTest::Disjunctive);
    CHECK(c.collision_trigger == CollisionTrigger::Literal);
    CHECK(c.neighbor_radius == 3.0);
    CHECK(c.gains.formation_p == DiagGain::uniform(2.0));
    CHECK(c.gains.obstacle_scale.diag == Vec3{0.1, 0.5, 0.1});
    CHECK(c.assignment == AssignmentMode::Greedy);
    CHECK(c.lloyd.samples == 50);
    CHECK(c.lloyd.rng_seed == 9);
    REQUIRE(c.buildings.size() == 1);
    CHECK(c.buildings[0].hi == Vec3{2, 2, 3});
    CHECK(parse_scenario(scenario_to_json(c)) == c);
}

TEST_CASE("schema text lists every section") {
    const std::string s = scenario_schema();
    for (const char* key : {"schema_version", "agents", "gains", "detection", "barrier", "cvt", "obstacles",
                            "buildings", "world_bounds", "theta_fov_deg"})
        CHECK(s.find(key) != std::string::npos);
}
