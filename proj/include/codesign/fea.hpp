#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "codesign/grid.hpp"

namespace codesign {

struct Material {
    double youngs = 1e9;
    double poisson = 0.3;
    /// Stiffness factor of void elements.
    double ersatz = 1e-6;

    void validate() const;
    bool operator==(const Material&) const = default;
};

/// Picks grid vertices by a named anchor. Point selectors snap to the nearest
/// vertex (lowest index on ties); hole selectors take every vertex within `radius`
/// of `point` that touches both a design element and a non-design element.
struct NodeSelector {
    enum class Kind { Corner, Edge, Point, Hole, Nodes };

    Kind kind = Kind::Point;
    std::string name;
    Point point = Point::Zero();
    double radius = 0.0;
    std::vector<std::size_t> nodes;

    static NodeSelector corner(std::string name);
    static NodeSelector edge(std::string name);
    static NodeSelector nearest(const Point& p);
    static NodeSelector hole(const Point& center, double radius);
    static NodeSelector explicitNodes(std::vector<std::size_t> nodes);

    /// Throws ConfigError when the selector names nothing on this grid.
    std::vector<std::size_t> resolve(const UniformGrid& grid, const ElementField& designMask) const;

    bool operator==(const NodeSelector&) const = default;
};

struct FixedDof {
    NodeSelector nodes;
    bool fixX = true;
    bool fixY = true;
    /// Prescribed displacement; zero for ordinary supports.
    Eigen::Vector2d value = Eigen::Vector2d::Zero();
    bool operator==(const FixedDof&) const = default;
};

/// Nodal point force. A selector resolving to several nodes shares the force evenly.
struct PointLoad {
    NodeSelector nodes;
    Eigen::Vector2d force = Eigen::Vector2d::Zero();
    bool operator==(const PointLoad&) const = default;
};

struct BoundaryConditions {
    std::vector<FixedDof> fixed;
    std::vector<PointLoad> loads;
    bool operator==(const BoundaryConditions&) const = default;
};

/// Symmetric tensors at an element centroid (tensor strain, not engineering shear).
struct CentroidState {
    Eigen::Matrix2d stress = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d strain = Eigen::Matrix2d::Zero();
};

struct FeaSolution {
    UniformGrid grid;
    /// Two entries (ux, uy) per vertex.
    std::vector<double> displacement;
    /// Per-element stiffness scale rho + ersatz (1 - rho).
    std::vector<double> modulusScale;
    std::vector<CentroidState> centroid;
    double compliance = 0.0;
    /// ||K u - f|| / ||f|| on the free degrees of freedom.
    double residual = 0.0;

    Eigen::Vector2d nodeDisplacement(std::size_t v) const { return {displacement[2 * v], displacement[2 * v + 1]}; }
    double maxDisplacement() const;
    double maxVonMises() const;
};

/// 8x8 stiffness of a square bilinear plane-stress element (unit thickness, unit
/// modulus scale) by 2x2 Gauss quadrature. DOFs are (ux, uy) of the nodes
/// counter-clockwise from the lower-left.
Eigen::Matrix<double, 8, 8> quadStiffness(const Material& mat, double side);

/// Strain and stress at the element centroids of a solved displacement field.
std::vector<CentroidState> recoverCentroidState(const UniformGrid& grid, const std::vector<double>& displacement,
                                                const std::vector<double>& modulusScale, const Material& mat);
std::vector<CentroidState> recoverCentroidState(const FeaSolution& sol, const Material& mat);

/// Elements within the design mask that touch a fixed node or a loaded node.
ElementField frozenElements(const UniformGrid& grid, const BoundaryConditions& bc, const ElementField& designMask);

/// Plane-stress linear elasticity on a 2D uniform grid with a fixed sparsity
/// pattern; repeated solves for different designs reuse the symbolic factorization.
class LinearElasticSystem {
public:
    LinearElasticSystem(UniformGrid grid, Material mat, BoundaryConditions bc);
    LinearElasticSystem(UniformGrid grid, Material mat, BoundaryConditions bc, const ElementField& designMask);
    ~LinearElasticSystem();
    LinearElasticSystem(LinearElasticSystem&&) noexcept;
    LinearElasticSystem& operator=(LinearElasticSystem&&) noexcept;

    /// Throws FeaError when the system is singular.
    FeaSolution solve(const ElementField& rho);

    const UniformGrid& grid() const { return grid_; }
    const Material& material() const { return material_; }
    std::size_t freeDofs() const;
    /// Number of factorizations performed so far.
    std::size_t solveCount() const { return solves_; }

private:
    struct Impl;
    UniformGrid grid_;
    Material material_;
    std::unique_ptr<Impl> impl_;
    std::size_t solves_ = 0;
};

FeaSolution assembleAndSolve(const UniformGrid& grid, const ElementField& rho, const Material& mat,
                             const BoundaryConditions& bc);

} // namespace codesign
