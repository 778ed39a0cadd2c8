#pragma once

#include <string>
#include <vector>

#include "codesign/config.hpp"

namespace codesign {

/// Names accepted by builtinScenario.
std::vector<std::string> scenarioNames();

/// Built-in assemblies. `scale` multiplies the element count along each axis (and
/// divides the element size), so the physical layout is unchanged. Layout
/// dimensions that are only shown pictorially are approximations.
///
/// cam-follower        part 0 follower (200x50), part 1 square cam (150x150 minus a
///                     2500-element hole) rotating a full turn about [0, 8].
/// three-squares       three 80x80 squares minus a 400-element hole, rotating about
///                     their centers.
/// gripper-cams        a 100x60 gripper and two 80x80 cams (400-element holes).
/// translating-squares unit squares on 64x64 grids; B slides from x = 2 to x = 0.
///
/// Throws ConfigError listing the valid names for an unknown name.
RunConfig builtinScenario(const std::string& name, double scale = 1.0);

} // namespace codesign
