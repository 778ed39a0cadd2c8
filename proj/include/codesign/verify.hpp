#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "codesign/collision.hpp"
#include "codesign/fea.hpp"
#include "codesign/optimizer.hpp"

namespace codesign {

struct OracleComparison {
    std::size_t stationary = 0;
    std::size_t moving = 0;
    double measure = 0.0;
    double oracle = 0.0;
    /// |measure - oracle| / oracle, or |measure| when the oracle is zero.
    double relativeError = 0.0;
    double cwmSeconds = 0.0;
};

/// CWM measure of every ordered pair against the supersampling oracle, for the
/// initial (all-solid) designs.
std::vector<OracleComparison> compareWithOracle(const Assembly& assembly, int samplesPerCell = 4);

struct GradientCheck {
    std::size_t flips = 0;
    /// Largest |G(flipped) - G - (+/-) grad(e)| in collision quanta; exactness means 0.
    std::int64_t maxDiscrepancy = 0;
};

/// Flips `maxFlips` distinct elements (all when 0) of rhoE one at a time and compares
/// the change in the pair collision count with the gradient prediction.
GradientCheck checkGradientLinearity(const CollisionWeightMatrix& w, const ElementField& rhoE,
                                     const VertexField& rhoV, std::size_t maxFlips, std::mt19937_64& rng);

/// Bernoulli(density) binary field.
ElementField randomDesign(const UniformGrid& grid, double density, std::mt19937_64& rng);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

struct RankingCheck {
    double spearman = 0.0;
    std::size_t elements = 0;
    std::vector<double> tsf;
    std::vector<double> complianceIncrease;
};

/// Cantilever on an nx x ny unit-spaced grid: left edge clamped, unit downward load
/// at the middle of the right edge. Compares the closed-form TSF with the exact
/// compliance increase of removing each element not touching the outer boundary.
RankingCheck tsfRankingCheck(int nx, int ny, const Material& mat = {});

} // namespace codesign
