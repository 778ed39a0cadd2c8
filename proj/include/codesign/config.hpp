#pragma once

#include <string>
#include <vector>

#include "codesign/fea.hpp"
#include "codesign/grid.hpp"
#include "codesign/motion.hpp"
#include "codesign/optimizer.hpp"

namespace codesign {

/// Elements removed from a region: either the `elements` centroids nearest to
/// `center` (ties by index) or every centroid within `radius`.
struct HoleSpec {
    Point center = Point::Zero();
    std::size_t elements = 0;
    double radius = 0.0;
    bool operator==(const HoleSpec&) const = default;
};

/// Binary element region: explicit values when given, otherwise the whole grid minus holes.
struct RegionSpec {
    std::vector<HoleSpec> holes;
    std::vector<double> values;
    bool operator==(const RegionSpec&) const = default;
};

struct PartConfig {
    std::string name;
    UniformGrid grid;
    RegionSpec designMask;
    RegionSpec initialSolid;
    Material material;
    BoundaryConditions bc;
    Trajectory trajectory;
    bool operator==(const PartConfig&) const = default;
};

struct OutputConfig {
    std::string directory = "run";
    bool checkpoints = true;
    bool fields = true;
    bool images = true;
    bool plots = true;
    bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
    std::vector<PartConfig> parts;
    /// Collision time steps K live in optimizer.steps.
    OptimizerSettings optimizer;
    OutputConfig outputs;
    bool operator==(const RunConfig&) const = default;
};

/// Parses and validates; errors carry the JSON path of the offending field.
RunConfig parseConfig(const std::string& path);
RunConfig parseConfigText(const std::string& text);
std::string writeConfigText(const RunConfig& config);
void writeConfig(const std::string& path, const RunConfig& config);

/// Checks every invariant (grids, selectors, settings); throws ConfigError.
void validateConfig(const RunConfig& config);

ElementField buildRegion(const UniformGrid& grid, const RegionSpec& spec);
Part buildPart(const PartConfig& config);
Assembly buildAssembly(const RunConfig& config);

} // namespace codesign
