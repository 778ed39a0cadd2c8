#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "codesign/grid.hpp"
#include "codesign/motion.hpp"

namespace codesign {

/// Sparse, nonnegative n^e(stationary) x n^v(moving) matrix of motion-only correlations.
///
/// Entry (e, v) is quantum() times the number of sampled times t_k at which moving
/// vertex v, carried by the relative motion, lies in stationary cell e. Counts are
/// stored exactly; every real-valued quantity derived from the matrix is an integer
/// multiple of quantum() = h^d / K.
class CollisionWeightMatrix {
public:
    CollisionWeightMatrix() = default;
    /// Builds from compressed columns; validates the layout.
    CollisionWeightMatrix(UniformGrid stationary, UniformGrid moving, int steps, std::vector<std::size_t> colStart,
                          std::vector<std::uint32_t> rowIndex, std::vector<std::uint32_t> counts);

    std::size_t rows() const { return stationary_.elementCount(); }
    std::size_t cols() const { return moving_.vertexCount(); }
    std::size_t nonZeros() const { return rowIndex_.size(); }
    int steps() const { return steps_; }
    double quantum() const { return stationary_.cellMeasure() / steps_; }
    double timeStep() const { return 1.0 / steps_; }

    const UniformGrid& stationaryGrid() const { return stationary_; }
    const UniformGrid& movingGrid() const { return moving_; }

    /// Column v occupies [colStart[v], colStart[v+1]) in rowIndex/counts.
    std::span<const std::size_t> colStart() const { return colStart_; }
    std::span<const std::uint32_t> rowIndex() const { return rowIndex_; }
    std::span<const std::uint32_t> counts() const { return counts_; }

    /// Step count at (row, col); 0 when absent.
    std::uint32_t count(std::size_t row, std::size_t col) const;
    double entry(std::size_t row, std::size_t col) const { return quantum() * count(row, col); }
    std::uint64_t columnCount(std::size_t col) const;

    bool operator==(const CollisionWeightMatrix&) const = default;

private:
    UniformGrid stationary_;
    UniformGrid moving_;
    int steps_ = 1;
    std::vector<std::size_t> colStart_{0};
    std::vector<std::uint32_t> rowIndex_;
    std::vector<std::uint32_t> counts_;
};

/// Number of assembleCWM calls made by this process (instrumentation).
std::uint64_t cwmAssemblyCount();

/// Riemann-sum assembly over K left-endpoint samples of rel = tau_stationary^-1 tau_moving.
/// Vertices that land outside the stationary grid contribute nothing.
CollisionWeightMatrix assembleCWM(const UniformGrid& stationaryGrid, const UniformGrid& movingGrid,
                                  const RelativeTrajectory& rel, int steps);

/// Exact rho_e^T W rho_v in units of quantum().
std::int64_t collisionCount(const ElementField& rhoE, const CollisionWeightMatrix& w, const VertexField& rhoV);
double collisionMeasure(const ElementField& rhoE, const CollisionWeightMatrix& w, const VertexField& rhoV);

/// Exact W rho_v in units of quantum(), one entry per stationary element.
std::vector<std::int64_t> weightedCounts(const CollisionWeightMatrix& w, const VertexField& rhoV);

/// All ordered-pair matrices W_{i,j} (i stationary, j moving) for an assembly.
class CollisionSet {
public:
    CollisionSet() = default;
    explicit CollisionSet(std::size_t parts) : parts_(parts), matrices_(parts * parts) {}

    /// Assembles every ordered pair i != j once.
    static CollisionSet assemble(const std::vector<UniformGrid>& grids, const std::vector<Trajectory>& trajectories,
                                 int steps);

    std::size_t parts() const { return parts_; }
    void set(std::size_t i, std::size_t j, CollisionWeightMatrix w);
    bool has(std::size_t i, std::size_t j) const;
    /// Throws ConfigError("missing collision weight matrix ...") when absent.
    const CollisionWeightMatrix& get(std::size_t i, std::size_t j) const;

private:
    std::size_t parts_ = 0;
    std::vector<std::optional<CollisionWeightMatrix>> matrices_;
};

struct CollisionReport {
    std::size_t parts = 0;
    /// Row-major N x N; entry (i, j) = g_{S_i,j} with i stationary. Diagonal is 0.
    std::vector<double> pairwise;
    std::vector<std::int64_t> pairwiseCounts;
    /// G_i = sum over j != i of pairwise(i, j).
    std::vector<double> aggregate;
    std::vector<std::int64_t> aggregateCounts;
    /// Per-part elementwise contributions rho_e(e) * sum_j (W_{i,j} rho_v_j)(e).
    std::vector<ElementField> localFields;

    double pair(std::size_t i, std::size_t j) const { return pairwise[i * parts + j]; }
    std::int64_t pairCount(std::size_t i, std::size_t j) const { return pairwiseCounts[i * parts + j]; }
    bool collisionFree() const;
};

CollisionReport aggregateCollision(const std::vector<ElementField>& rhoE, const std::vector<VertexField>& rhoV,
                                   const CollisionSet& cwms);

/// dG_i/d rho_e_i = sum_{j != i} W_{i,j} rho_v_j (exact: G_i is linear in rho_e_i).
ElementField collisionGradient(const CollisionSet& cwms, std::size_t part, const std::vector<VertexField>& rhoV);
/// Same, in integer multiples of the pair quanta. All pairs with part i stationary share one quantum.
std::vector<std::int64_t> collisionGradientCounts(const CollisionSet& cwms, std::size_t part,
                                                  const std::vector<VertexField>& rhoV);

/// Per element of `part`, the summed collision weight its vertices pick up in the other
/// parts' measures (W_{j,part}^T rho_e_j), i.e. how much part i is seen by the others.
ElementField reverseCollisionPressure(const CollisionSet& cwms, std::size_t part,
                                      const std::vector<ElementField>& rhoE);

/// Keeps W_{i,j} rho_v_j for every ordered pair and updates it column by column when
/// a part's vertex field changes, so each iteration touches only the changed vertices.
class CollisionTracker {
public:
    CollisionTracker(const CollisionSet& cwms, std::vector<VertexField> rhoV);

    /// Replaces part j's vertex field; results stay bit-identical to a full recomputation.
    void update(std::size_t part, const VertexField& rhoV);
    const VertexField& vertexField(std::size_t part) const { return rhoV_[part]; }

    std::vector<std::int64_t> gradientCounts(std::size_t part) const;
    ElementField gradient(std::size_t part) const;
    CollisionReport report(const std::vector<ElementField>& rhoE) const;

private:
    const CollisionSet* cwms_;
    std::vector<VertexField> rhoV_;
    std::vector<std::vector<std::int64_t>> products_; // row-major (i, j)
};

/// T_G = 1 - grad / max(grad), or all ones when the maximum is zero. When `mask` is
/// given, the maximum is taken over mask elements only and the result is clamped to [0, 1].
ElementField collisionSensitivity(const ElementField& grad, const ElementField* mask = nullptr);

/// Binary triplet cache: magic "CWM1", stationary and moving grids, spacing, time step,
/// K, then nnz records of (uint32 row, uint32 col, uint32 count). Little-endian.
void writeCWM(std::ostream& out, const CollisionWeightMatrix& w);
void writeCWM(const std::string& path, const CollisionWeightMatrix& w);
CollisionWeightMatrix readCWM(std::istream& in);
CollisionWeightMatrix readCWM(const std::string& path);

} // namespace codesign
