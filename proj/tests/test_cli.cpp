#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "swarm/cli.hpp"

namespace fs = std::filesystem;
using namespace swarm;
using namespace swarm::cli;

namespace {

const fs::path kCaseA = SWARM_SOURCE_DIR "/scenarios/case_a.json";

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "swarm_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

int run_main(std::vector<std::string> args) {
    args.insert(args.begin(), "swarm");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return swarm::cli::main(static_cast<int>(argv.size()), argv.data());
}

// A short scenario so CLI tests stay fast.
fs::path short_scenario(const fs::path& dir, double duration = 3.0) {
    auto doc = nlohmann::json::parse(slurp(kCaseA));
    doc["duration"] = duration;
    const fs::path p = dir / "short.json";
    spit(p, doc.dump(2));
    return p;
}

std::vector<std::vector<double>> read_csv_numbers(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("run writes every output and repeats byte for byte") {
    const fs::path dir = scratch("run");
    const fs::path scenario = short_scenario(dir);
    REQUIRE(run_main({"run", scenario.string(), "--out", (dir / "a").string()}) == kOk);
    REQUIRE(run_main({"run", scenario.string(), "--out", (dir / "b").string()}) == kOk);
    for (const char* f : {"trajectory.csv", "obstacles.csv", "metrics.json", "manifest.json"}) {
        CAPTURE(f);
        CHECK(fs::exists(dir / "a" / f));
    }
    CHECK(slurp(dir / "a" / "trajectory.csv") == slurp(dir / "b" / "trajectory.csv"));
    CHECK(slurp(dir / "a" / "metrics.json") == slurp(dir / "b" / "metrics.json"));
    CHECK(read_csv_numbers(dir / "a" / "trajectory.csv").size() == 8 * 31);

    const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
    CHECK(manifest["init_seed"] == 11);
    CHECK(manifest["steps"] == 31);
    CHECK(manifest["config"]["name"] == "case_a");

    REQUIRE(run_main({"run", scenario.string(), "--out", (dir / "c").string(), "--seed", "12"}) == kOk);
    CHECK(slurp(dir / "a" / "trajectory.csv") != slurp(dir / "c" / "trajectory.csv"));
    CHECK(nlohmann::json::parse(slurp(dir / "c" / "manifest.json"))["init_seed"] == 12);

    REQUIRE(run_main({"run", scenario.string(), "--out", (dir / "d").string(), "--mode", "3d"}) == kOk);
    CHECK(nlohmann::json::parse(slurp(dir / "d" / "manifest.json"))["config"]["mode"] == "3d");
}

TEST_CASE("run exit codes") {
    const fs::path dir = scratch("codes");
    CHECK(run_main({"run", (dir / "nope.json").string(), "--out", dir.string()}) == kMissingFile);

    auto doc = nlohmann::json::parse(slurp(kCaseA));
    doc["detection"]["r_s"] = 5.0;
    spit(dir / "bad.json", doc.dump());
    CHECK(run_main({"run", (dir / "bad.json").string(), "--out", dir.string()}) == kSchemaViolation);

    spit(dir / "garbled.json", "{\"schema_version\": 1,");
    CHECK(run_main({"run", (dir / "garbled.json").string(), "--out", dir.string()}) == kSchemaViolation);

    doc = nlohmann::json::parse(slurp(kCaseA));
    doc["duration"] = 5.0;
    doc["world_bounds"] = {{"min", {-6, -6, -1}}, {"max", {6, 6, 2}}};
    spit(dir / "tiny.json", doc.dump());
    CHECK(run_main({"run", (dir / "tiny.json").string(), "--out", dir.string()}) == kDivergence);

    CHECK(run_main({"run", kCaseA.string()}) == kUsage);
    CHECK(run_main({"run", kCaseA.string(), "--out", dir.string(), "--mode", "sideways"}) == kUsage);
    CHECK(run_main({"frobnicate"}) == kUsage);
    CHECK(run_main({}) == kUsage);
    CHECK(run_main({"--schema-dump"}) == kOk);
}

TEST_CASE("cvt command") {
    const fs::path dir = scratch("cvt");
    REQUIRE(run_main({"cvt", "--region", "0", "0", "10", "8", "-n", "20", "--out", (dir / "seeds.csv").string()}) ==
            kOk);
    const auto seeds = read_csv_numbers(dir / "seeds.csv");
    REQUIRE(seeds.size() == 20);
    for (const auto& s : seeds) {
        CHECK(s[1] >= 0.0);
        CHECK(s[1] <= 10.0);
        CHECK(s[2] >= 0.0);
        CHECK(s[2] <= 8.0);
    }
    const auto trace = read_csv_numbers(dir / "seeds_energy.csv");
    REQUIRE(trace.size() >= 2);
    CHECK(trace.back()[1] < trace.front()[1]);

    REQUIRE(run_main({"cvt", "-n", "1", "--out", (dir / "one.csv").string(), "--energy-out",
                      (dir / "one_trace.csv").string()}) == kOk);
    const auto one = read_csv_numbers(dir / "one.csv");
    REQUIRE(one.size() == 1);
    CHECK(std::hypot(one[0][1] - 0.5, one[0][2] - 0.5) < 0.02);
    CHECK(fs::exists(dir / "one_trace.csv"));

    CHECK(run_main({"cvt", "-n", "0", "--out", (dir / "zero.csv").string()}) == kSchemaViolation);
    CHECK(run_main({"cvt", "--region", "0", "0", "-1", "1", "-n", "2", "--out", (dir / "z.csv").string()}) ==
          kSchemaViolation);
    CHECK(run_main({"cvt", "-n", "2"}) == kUsage);
}

TEST_CASE("metrics and plot commands") {
    const fs::path dir = scratch("post");
    const fs::path scenario = short_scenario(dir);
    REQUIRE(run_main({"run", scenario.string(), "--out", dir.string()}) == kOk);
    const fs::path traj = dir / "trajectory.csv";

    REQUIRE(run_main({"metrics", scenario.string(), traj.string(), "--out", (dir / "m.json").string()}) == kOk);
    CHECK(slurp(dir / "m.json") == slurp(dir / "metrics.json"));

    const std::string before = slurp(traj);
    for (const char* view : {"top", "3d-projection", "separation"}) {
        CAPTURE(view);
        const fs::path out = dir / (std::string(view) + ".svg");
        CHECK(run_main({"plot", traj.string(), "--out", out.string(), "--view", view, "--scenario",
                        scenario.string()}) == kOk);
        CHECK(slurp(out).find("<svg") != std::string::npos);
    }
    CHECK(slurp(traj) == before);

    spit(dir / "broken.csv", "t,agent_id,px\n0,0,1\n");
    CHECK(run_main({"plot", (dir / "broken.csv").string(), "--out", (dir / "x.svg").string()}) == kParseError);
    CHECK(run_main({"metrics", scenario.string(), (dir / "broken.csv").string()}) == kParseError);
    CHECK(run_main({"plot", (dir / "missing.csv").string(), "--out", (dir / "x.svg").string()}) == kMissingFile);
    CHECK(run_main({"plot", traj.string(), "--out", (dir / "x.svg").string(), "--view", "side"}) == kUsage);

    // Trajectory from a different agent count.
    auto doc = nlohmann::json::parse(slurp(scenario));
    doc["agents"]["count"] = 3;
    spit(dir / "three.json", doc.dump());
    CHECK(run_main({"metrics", (dir / "three.json").string(), traj.string()}) == kParseError);
}
