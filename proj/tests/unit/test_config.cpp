#include <doctest.h>

#include <string>

#include "codesign/config.hpp"
#include "codesign/scenarios.hpp"

using namespace codesign;

namespace {

const std::string kMinimal = R"({
  "parts": [{
    "grid": {"dims": [4, 2], "spacing": 0.5},
    "bc": {
      "fixed": [{"select": {"edge": "left"}, "axes": "xy"}],
      "loads": [{"select": {"corner": "top-right"}, "force": [0, -1]}]
    }
  }]
})";

std::size_t elements(const PartConfig& p)
{
    return p.grid.elementCount();
}

} // namespace

TEST_CASE("a minimal config gets every default")
{
    const RunConfig c = parseConfigText(kMinimal);
    REQUIRE(c.parts.size() == 1);
    const PartConfig& p = c.parts[0];
    CHECK(p.material.youngs == 1e9);
    CHECK(p.material.poisson == 0.3);
    CHECK(p.material.ersatz == 1e-6);
    CHECK(c.optimizer.maxVolumeStep == 0.025);
    CHECK(c.optimizer.tolerance == 1e-3);
    CHECK(c.optimizer.steps >= 1);
    const Assembly a = buildAssembly(c);
    CHECK(a.parts[0].designMask.countSolid() == 8);
    CHECK(a.parts[0].trajectory.at(0.7).isApprox(RigidTransform::identity(), 0.0));
}

TEST_CASE("errors name the offending field")
{
    CHECK_THROWS_WITH_AS(parseConfigText(R"({"parts": [{"grid": {"dims": [4, 4], "spacing": -0.25}}]})"),
                         doctest::Contains("parts[0].grid.spacing"), ConfigError);
    CHECK_THROWS_WITH_AS(parseConfigText(R"({"parts": [{"grid": {"dims": [4, 4], "spacing": 1, "colour": 2}}]})"),
                         doctest::Contains("parts[0].grid.colour: unknown field"), ConfigError);
    CHECK_THROWS_WITH_AS(parseConfigText(R"({"parts": []})"), doctest::Contains("parts"), ConfigError);
    CHECK_THROWS_AS(parseConfigText("{not json"), ConfigError);
    CHECK_THROWS_AS(parseConfig("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("unresolvable selectors are invariant violations")
{
    std::string bad = kMinimal;
    bad.replace(bad.find("top-right"), 9, "up-right");
    CHECK_THROWS_AS(parseConfigText(bad), ConfigError);
}

TEST_CASE("written configs parse back to the same value")
{
    const RunConfig c = parseConfigText(kMinimal);
    CHECK(parseConfigText(writeConfigText(c)) == c);
}

TEST_CASE("built-in scenarios validate and round-trip at every scale")
{
    for (const std::string& name : scenarioNames())
        for (double scale : {0.25, 0.5, 1.0}) {
            CAPTURE(name);
            CAPTURE(scale);
            const RunConfig c = builtinScenario(name, scale);
            CHECK_NOTHROW(validateConfig(c));
            CHECK(parseConfigText(writeConfigText(c)) == c);
        }
}

TEST_CASE("cam-follower discretizes the follower into 10,000 and the cam into 20,000 elements")
{
    const RunConfig c = builtinScenario("cam-follower");
    REQUIRE(c.parts.size() == 2);
    CHECK(elements(c.parts[0]) == 10000);
    CHECK(elements(c.parts[1]) == 22500);
    const Assembly a = buildAssembly(c);
    CHECK(a.parts[1].designMask.countSolid() == 20000);
    CHECK(c.parts[0].bc.loads[0].force == Eigen::Vector2d(1.0, 0.0));
    CHECK(c.parts[1].bc.loads[0].force == Eigen::Vector2d(0.0, -1.0));
}

TEST_CASE("three-squares discretizes every part into 6,000 design elements")
{
    const Assembly a = buildAssembly(builtinScenario("three-squares"));
    REQUIRE(a.parts.size() == 3);
    for (const Part& p : a.parts)
        CHECK(p.designMask.countSolid() == 6000);
}

TEST_CASE("gripper-cams uses 500 time steps and holed, corner-loaded cams")
{
    const RunConfig c = builtinScenario("gripper-cams");
    CHECK(c.optimizer.steps == 500);
    REQUIRE(c.parts.size() == 3);
    for (std::size_t i = 1; i < 3; ++i) {
        CHECK(c.parts[i].designMask.holes.size() == 1);
        CHECK(c.parts[i].bc.loads[0].nodes == NodeSelector::corner("top-right"));
    }
}

TEST_CASE("scaling changes resolution, not size")
{
    for (const std::string& name : scenarioNames()) {
        const RunConfig a = builtinScenario(name, 1.0);
        const RunConfig b = builtinScenario(name, 0.5);
        for (std::size_t i = 0; i < a.parts.size(); ++i)
            CHECK(a.parts[i].grid.cells[0] * a.parts[i].grid.spacing ==
                  doctest::Approx(b.parts[i].grid.cells[0] * b.parts[i].grid.spacing));
    }
}

TEST_CASE("unknown scenarios list the options")
{
    CHECK_THROWS_WITH_AS(builtinScenario("pendulum"), doctest::Contains("cam-follower"), ConfigError);
    CHECK_THROWS_AS(builtinScenario("cam-follower", 0.0), ConfigError);
}
