#include "swarm/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace swarm {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Walks one JSON object, remembering which keys were read so that any
// leftover key can be reported as unknown.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail("expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& get(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key)) fail("missing required key '" + key + "'");
        return j_.at(key);
    }

    double number(const std::string& key) {
        const json& v = get(key);
        if (!v.is_number()) fail("'" + key + "' must be a number");
        return v.get<double>();
    }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::int64_t integer(const std::string& key) {
        const json& v = get(key);
        if (!v.is_number_integer()) fail("'" + key + "' must be an integer");
        return v.get<std::int64_t>();
    }
    std::int64_t integer(const std::string& key, std::int64_t fallback) { return has(key) ? integer(key) : fallback; }

    std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        const json& v = get(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            fail("'" + key + "' must be a non-negative integer");
        return v.get<std::uint64_t>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const json& v = get(key);
        if (!v.is_string()) fail("'" + key + "' must be a string");
        return v.get<std::string>();
    }

    Vec3 vec3(const std::string& key) {
        const json& v = get(key);
        if (!v.is_array() || v.size() != 3) fail("'" + key + "' must be an array of 3 numbers");
        for (const auto& e : v)
            if (!e.is_number()) fail("'" + key + "' must be an array of 3 numbers");
        return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }
    Vec3 vec3(const std::string& key, const Vec3& fallback) { return has(key) ? vec3(key) : fallback; }

    std::pair<double, double> vec2(const std::string& key) {
        const json& v = get(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            fail("'" + key + "' must be an array of 2 numbers");
        return {v[0].get<double>(), v[1].get<double>()};
    }

    // A diagonal gain given either as a scalar or as three diagonal entries.
    DiagGain gain(const std::string& key, const DiagGain& fallback) {
        if (!has(key)) return fallback;
        const json& v = get(key);
        if (v.is_number()) return DiagGain::uniform(v.get<double>());
        return DiagGain{vec3(key)};
    }

    ObjectReader child(const std::string& key) { return ObjectReader(get(key), path_ + "." + key); }
    std::string path() const { return path_; }

    void finish() const {
        for (const auto& item : j_.items())
            if (!seen_.count(item.key())) fail("unknown key '" + item.key() + "'");
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ScenarioError(path_ + ": " + msg); }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

Maneuver parse_mode(const std::string& s, const ObjectReader& r) {
    if (s == "planar") return Maneuver::Planar;
    if (s == "3d") return Maneuver::Spatial;
    r.fail("mode must be 'planar' or '3d'");
}

const char* mode_name(Maneuver m) { return m == Maneuver::Planar ? "planar" : "3d"; }

ordered_json vec_json(const Vec3& v) { return ordered_json::array({v.x, v.y, v.z}); }

}  // namespace

SimConfig parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("scenario: invalid JSON: ") + e.what());
    }

    ObjectReader root(doc, "scenario");
    const auto version = root.integer("schema_version");
    if (version != kScenarioSchemaVersion)
        root.fail("unsupported schema_version " + std::to_string(version));

    SimConfig c;
    c.name = root.string("name", c.name);
    c.mode = parse_mode(root.string("mode", "planar"), root);
    c.dt = root.number("dt");
    c.duration = root.number("duration");

    {
        ObjectReader a = root.child("agents");
        c.agents = static_cast<int>(a.integer("count"));
        c.init.mean = a.vec3("init_mean", c.init.mean);
        c.init.variance = a.vec3("init_variance", c.init.variance);
        c.init.seed = a.seed("seed", c.init.seed);
        c.init.min_separation = a.number("min_separation", c.init.min_separation);
        a.finish();
    }

    if (root.has("gains")) {
        ObjectReader g = root.child("gains");
        c.gains.formation_p = g.gain("K_p", c.gains.formation_p);
        c.gains.formation_v = g.gain("K_v", c.gains.formation_v);
        c.gains.collision_spring = g.gain("k_c1", c.gains.collision_spring);
        c.gains.collision_damping = g.gain("k_c2", c.gains.collision_damping);
        c.gains.obstacle_scale = g.gain("k_v", c.gains.obstacle_scale);
        c.gains.rotation = g.number("k_r", c.gains.rotation);
        c.gains.obstacle_repulsion = g.gain("k_o1", c.gains.obstacle_repulsion);
        c.gains.obstacle_damping = g.gain("k_o2", c.gains.obstacle_damping);
        g.finish();
    }

    if (root.has("detection")) {
        ObjectReader d = root.child("detection");
        c.detection.r_d = d.number("r_d", c.detection.r_d);
        c.detection.r_s = d.number("r_s", c.detection.r_s);
        if (d.has("theta_fov") && d.has("theta_fov_deg")) d.fail("give only one of theta_fov, theta_fov_deg");
        if (d.has("theta_fov_deg")) c.detection.theta_fov = d.number("theta_fov_deg") * kPi / 180.0;
        else c.detection.theta_fov = d.number("theta_fov", c.detection.theta_fov);
        c.neighbor_radius = d.number("neighbor_radius", c.detection.r_d);
        const std::string vt = d.string("vertical_test", "and");
        if (vt == "and") c.vertical_test = VerticalTest::Conjunctive;
        else if (vt == "or") c.vertical_test = VerticalTest::Disjunctive;
        else d.fail("vertical_test must be 'and' or 'or'");
        const std::string trig = d.string("collision_trigger", "band");
        if (trig == "band") c.collision_trigger = CollisionTrigger::Band;
        else if (trig == "literal") c.collision_trigger = CollisionTrigger::Literal;
        else d.fail("collision_trigger must be 'band' or 'literal'");
        d.finish();
    } else {
        c.neighbor_radius = c.detection.r_d;
    }

    {
        ObjectReader b = root.child("barrier");
        const auto [ox, oy] = b.vec2("origin");
        const auto [sx, sy] = b.vec2("size");
        c.barrier.origin = {ox, oy, 0.0};
        c.barrier.size_x = sx;
        c.barrier.size_y = sy;
        c.barrier.altitude = b.number("altitude");
        c.barrier.velocity = b.vec3("velocity", c.barrier.velocity);
        b.finish();
    }

    if (root.has("cvt")) {
        ObjectReader v = root.child("cvt");
        c.lloyd.samples = static_cast<int>(v.integer("samples", c.lloyd.samples));
        c.lloyd.a1 = v.number("a1", c.lloyd.a1);
        c.lloyd.a2 = v.number("a2", c.lloyd.a2);
        c.lloyd.b1 = v.number("b1", c.lloyd.b1);
        c.lloyd.b2 = v.number("b2", c.lloyd.b2);
        c.lloyd.max_iter = static_cast<int>(v.integer("max_iter", c.lloyd.max_iter));
        c.lloyd.move_tol = v.number("move_tol", c.lloyd.move_tol);
        c.lloyd.rng_seed = v.seed("seed", c.lloyd.rng_seed);
        const std::string mode = v.string("assignment", "optimal");
        if (mode == "optimal") c.assignment = AssignmentMode::Optimal;
        else if (mode == "greedy") c.assignment = AssignmentMode::Greedy;
        else v.fail("assignment must be 'optimal' or 'greedy'");
        c.retessellate_period = v.number("retessellate_period", c.retessellate_period);
        v.finish();
    }

    if (root.has("obstacles")) {
        const json& list = root.get("obstacles");
        if (!list.is_array()) root.fail("'obstacles' must be an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            ObjectReader o(list[i], root.path() + ".obstacles[" + std::to_string(i) + "]");
            Obstacle ob;
            ob.id = static_cast<int>(o.integer("id", static_cast<std::int64_t>(i) + 1));
            ob.center = o.vec3("center");
            ob.radius = o.number("radius", ob.radius);
            ob.velocity = o.vec3("velocity", ob.velocity);
            ob.activation_time = o.number("activation_time", ob.activation_time);
            o.finish();
            c.obstacles.push_back(ob);
        }
    }

    if (root.has("buildings")) {
        const json& list = root.get("buildings");
        if (!list.is_array()) root.fail("'buildings' must be an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            ObjectReader o(list[i], root.path() + ".buildings[" + std::to_string(i) + "]");
            Building b;
            b.lo = o.vec3("min");
            b.hi = o.vec3("max");
            o.finish();
            c.buildings.push_back(b);
        }
    }

    if (root.has("world_bounds")) {
        ObjectReader w = root.child("world_bounds");
        c.bounds_lo = w.vec3("min");
        c.bounds_hi = w.vec3("max");
        w.finish();
    }
    root.finish();

    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(e.what());
    }
    return c;
}

SimConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string scenario_to_json(const SimConfig& c) {
    ordered_json j;
    j["schema_version"] = kScenarioSchemaVersion;
    j["name"] = c.name;
    j["mode"] = mode_name(c.mode);
    j["dt"] = c.dt;
    j["duration"] = c.duration;
    j["agents"] = {{"count", c.agents},
                   {"init_mean", vec_json(c.init.mean)},
                   {"init_variance", vec_json(c.init.variance)},
                   {"seed", c.init.seed},
                   {"min_separation", c.init.min_separation}};
    j["gains"] = {{"K_p", vec_json(c.gains.formation_p.diag)},
                  {"K_v", vec_json(c.gains.formation_v.diag)},
                  {"k_c1", vec_json(c.gains.collision_spring.diag)},
                  {"k_c2", vec_json(c.gains.collision_damping.diag)},
                  {"k_v", vec_json(c.gains.obstacle_scale.diag)},
                  {"k_r", c.gains.rotation},
                  {"k_o1", vec_json(c.gains.obstacle_repulsion.diag)},
                  {"k_o2", vec_json(c.gains.obstacle_damping.diag)}};
    j["detection"] = {{"r_d", c.detection.r_d},
                      {"r_s", c.detection.r_s},
                      {"theta_fov", c.detection.theta_fov},
                      {"neighbor_radius", c.neighbor_radius},
                      {"vertical_test", c.vertical_test == VerticalTest::Conjunctive ? "and" : "or"},
                      {"collision_trigger", c.collision_trigger == CollisionTrigger::Band ? "band" : "literal"}};
    j["barrier"] = {{"origin", ordered_json::array({c.barrier.origin.x, c.barrier.origin.y})},
                    {"size", ordered_json::array({c.barrier.size_x, c.barrier.size_y})},
                    {"altitude", c.barrier.altitude},
                    {"velocity", vec_json(c.barrier.velocity)}};
    j["cvt"] = {{"samples", c.lloyd.samples},
                {"a1", c.lloyd.a1},
                {"a2", c.lloyd.a2},
                {"b1", c.lloyd.b1},
                {"b2", c.lloyd.b2},
                {"max_iter", c.lloyd.max_iter},
                {"move_tol", c.lloyd.move_tol},
                {"seed", c.lloyd.rng_seed},
                {"assignment", c.assignment == AssignmentMode::Optimal ? "optimal" : "greedy"},
                {"retessellate_period", c.retessellate_period}};
    ordered_json obstacles = ordered_json::array();
    for (const auto& o : c.obstacles)
        obstacles.push_back({{"id", o.id},
                             {"center", vec_json(o.center)},
                             {"radius", o.radius},
                             {"velocity", vec_json(o.velocity)},
                             {"activation_time", o.activation_time}});
    j["obstacles"] = obstacles;
    ordered_json buildings = ordered_json::array();
    for (const auto& b : c.buildings) buildings.push_back({{"min", vec_json(b.lo)}, {"max", vec_json(b.hi)}});
    j["buildings"] = buildings;
    j["world_bounds"] = {{"min", vec_json(c.bounds_lo)}, {"max", vec_json(c.bounds_hi)}};
    return j.dump(2) + "\n";
}

std::string scenario_schema() {
    return R"({
  "schema_version": "integer, required, must be 1",
  "name": "string, optional",
  "mode": "'planar' | '3d', default 'planar'",
  "dt": "number [s], required, > 0",
  "duration": "number [s], required, >= dt",
  "agents": {
    "count": "integer, required, >= 1",
    "init_mean": "[x, y, z] [m], default [0, 0, 0]",
    "init_variance": "[vx, vy, vz] [m^2] diagonal covariance, default [1, 1, 0]",
    "seed": "unsigned integer, default 1",
    "min_separation": "number [m], redraw initial samples closer than this, default 0"
  },
  "gains": {
    "K_p": "scalar or [3] diagonal [1/s^2], default 3",
    "K_v": "scalar or [3] diagonal [1/s], default 5",
    "k_c1": "scalar or [3] diagonal [m^3/s^2], default 1",
    "k_c2": "scalar or [3] diagonal [1/s], default 1",
    "k_v": "scalar or [3] diagonal [-], default [0.1, 0.5, 0.1]",
    "k_r": "number [1/s^2], default 0.5",
    "k_o1": "scalar or [3] diagonal [m/s^2 per m], default 5",
    "k_o2": "scalar or [3] diagonal [1/s], default 1"
  },
  "detection": {
    "r_d": "number [m], default 2",
    "r_s": "number [m], default 1, 0 < r_s < r_d",
    "theta_fov_deg": "number [deg] FOV half-angle, default 60",
    "theta_fov": "number [rad], alternative to theta_fov_deg",
    "neighbor_radius": "number [m] collision activation radius, default r_d",
    "vertical_test": "'and' | 'or', default 'and'",
    "collision_trigger": "'band' | 'literal', default 'band'"
  },
  "barrier": {
    "origin": "[x, y] [m] min corner at t = 0, required",
    "size": "[sx, sy] [m], required, positive",
    "altitude": "number [m], required",
    "velocity": "[vx, vy, vz] [m/s], default [1, 0, 0]"
  },
  "cvt": {
    "samples": "integer samples per iteration, default 100 * count",
    "a1": "number, default 0.995", "a2": "number, default 0.005",
    "b1": "number, default -1", "b2": "number, default 2",
    "max_iter": "integer, default 500",
    "move_tol": "number [m], default 0.001",
    "seed": "unsigned integer, default 1",
    "assignment": "'optimal' | 'greedy', default 'optimal'",
    "retessellate_period": "number [s], 0 disables, default 0"
  },
  "obstacles": [{"id": "integer", "center": "[x, y, z] [m]", "radius": "number [m], default 1",
                 "velocity": "[vx, vy, vz] [m/s], default 0", "activation_time": "number [s], default 0"}],
  "buildings": [{"min": "[x, y, z] [m]", "max": "[x, y, z] [m]"}],
  "world_bounds": {"min": "[x, y, z] [m]", "max": "[x, y, z] [m]"}
}
)";
}

}  // namespace swarm
