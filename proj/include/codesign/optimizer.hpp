#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "codesign/collision.hpp"
#include "codesign/fea.hpp"
#include "codesign/grid.hpp"
#include "codesign/motion.hpp"
#include "codesign/sensitivity.hpp"

namespace codesign {

enum class TerminationMode { CollisionFree, VolumeTarget };

std::string toString(TerminationMode mode);
TerminationMode terminationModeFromString(const std::string& s);

struct OptimizerSettings {
    /// Per-part values; a single entry is broadcast to every part.
    std::vector<double> volumeTarget{0.05};
    std::vector<double> gamma{1.0};
    std::vector<double> lambdaG{0.2};
    double maxVolumeStep = 0.025;
    /// Relative compliance change that ends the inner loop.
    double tolerance = 1e-3;
    int maxInner = 20;
    int maxOuter = 400;
    /// Collision time steps K.
    int steps = 1000;
    TerminationMode mode = TerminationMode::CollisionFree;
    /// Compliance ratio above which a part stops shrinking.
    double ratioCap = 10.0;
    /// When false, the compliance term is dropped and designs follow the collision field alone.
    bool compliance = true;

    void validate(std::size_t parts) const;
    double volumeTargetOf(std::size_t part) const;
    double gammaOf(std::size_t part) const;
    double lambdaGOf(std::size_t part) const;

    bool operator==(const OptimizerSettings&) const = default;
};

struct Part {
    std::string name;
    UniformGrid grid;
    /// Elements that may ever hold material.
    ElementField designMask;
    /// Starting design; intersected with the design mask.
    ElementField initial;
    Material material;
    BoundaryConditions bc;
    Trajectory trajectory;

    bool operator==(const Part&) const = default;
};

struct Assembly {
    std::vector<Part> parts;
    OptimizerSettings settings;
};

struct ThresholdResult {
    double tau = 0.0;
    /// Exact kept set: elements of `rho` with sens > tau, plus frozen ones, with ties
    /// at tau resolved by removing the lower index first.
    ElementField design;
    std::size_t kept = 0;
};

/// Order-statistic threshold over the solid, non-frozen elements of `rho`. The target
/// is a fraction of the design mask, floored to whole elements. Throws ConfigError
/// ("target conflicts with frozen material") when the target is below the frozen fraction.
ThresholdResult findThreshold(const ElementField& sens, const ElementField& rho, const ElementField& frozen,
                              const ElementField& mask, double targetFraction);
ThresholdResult findThreshold(const ElementField& sens, const ElementField& frozen, double targetFraction);

/// Whole-element count for a mask fraction.
std::size_t targetElementCount(double fraction, std::size_t maskCount);

struct InnerResult {
    ElementField design;
    FeaSolution solution;
    SensitivityBundle sensitivity;
    double compliance = 0.0;
    double tau = 0.0;
    int iterations = 0;
    std::size_t solves = 0;
    double feaSeconds = 0.0;
    double sensitivitySeconds = 0.0;
    bool singular = false;
    std::string failure;
};

/// Fixed-point iteration at one volume target: rank the elements of `outer` by the
/// augmented field of the current solution, keep the target count, re-solve, and stop
/// when the relative compliance change is at most the tolerance or the design repeats.
/// `system` may be null when the compliance term is disabled.
InnerResult innerLoop(LinearElasticSystem* system, const Part& part, const ElementField& outer,
                      const FeaSolution* outerSolution, const ElementField& frozen, const ElementField& tg,
                      double lambdaG, double targetFraction, const OptimizerSettings& settings);

struct TraceRow {
    int iter = 0;
    std::size_t part = 0;
    double v = 0.0;
    double compliance = 0.0;
    double ratio = 0.0;
    double G = 0.0;
    std::int64_t collisionCount = 0;
    double tau = 0.0;
    int innerIters = 0;
};

struct RunStatistics {
    double cwmSeconds = 0.0;
    std::uint64_t cwmAssemblies = 0;
    std::size_t feaSolves = 0;
    /// Per outer iteration (index 0 is the initial evaluation).
    std::vector<double> feaSeconds;
    std::vector<double> collisionSeconds;
    std::vector<double> sensitivitySeconds;
};

struct OptimizationTrace {
    std::vector<TraceRow> rows;
    std::vector<ElementField> designs;
    std::vector<double> initialCompliance;
    std::vector<bool> suspended;
    CollisionReport finalReport;
    RunStatistics stats;
    int outerIterations = 0;
    bool converged = false;
    std::string stopReason;

    /// Rows of the last logged iteration, one per part.
    std::vector<TraceRow> finalRows() const;
};

struct IterationSnapshot {
    int iteration = 0;
    const std::vector<ElementField>& designs;
    const std::vector<SensitivityBundle>& sensitivities;
    const CollisionReport& report;
};

using CheckpointFn = std::function<void(const IterationSnapshot&)>;

/// Collision-aware co-design loop. Parts shrink in order within each outer iteration,
/// each seeing the latest designs of the others.
OptimizationTrace coDesign(const Assembly& assembly, const CheckpointFn& checkpoint = {});
/// Same, reusing precomputed collision weight matrices.
OptimizationTrace coDesign(const Assembly& assembly, const CollisionSet& cwms, const CheckpointFn& checkpoint = {});

} // namespace codesign
