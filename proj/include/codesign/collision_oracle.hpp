#pragma once

#include "codesign/grid.hpp"
#include "codesign/motion.hpp"

namespace codesign {

/// Reference collision measure by direct supersampling, independent of the
/// collision weight matrices.
///
/// For each of K left-endpoint times, every solid stationary element is covered
/// by samplesPerCell^d stratified points; a point counts when the inverse-moved
/// point falls in a solid element of `moving`. Returns the Riemann sum of the
/// overlap measure, i.e. an estimate of the time-integrated overlap volume.
double oracleCollision(const ElementField& stationary, const ElementField& moving, const RelativeTrajectory& rel,
                       int steps, int samplesPerCell);

} // namespace codesign
