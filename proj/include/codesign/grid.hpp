#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "codesign/error.hpp"

namespace codesign {

/// Points are stored in 3D; 2D geometry lives in the z = 0 plane.
using Point = Eigen::Vector3d;

/// Axis-aligned regular grid of square (2D) or cubic (3D) elements.
///
/// Elements are indexed x-fastest: e = i + nx * (j + ny * k). Vertices use the
/// same ordering over the (nx+1) x (ny+1) [x (nz+1)] lattice. The cell that
/// element e owns for point classification is the half-open box
/// [origin + i*h, origin + (i+1)*h) per axis, i.e. the dual cell centered at the
/// element centroid.
struct UniformGrid {
    int dim = 2;
    std::array<double, 3> origin{0.0, 0.0, 0.0};
    double spacing = 1.0;
    std::array<int, 3> cells{1, 1, 1};

    static UniformGrid make2d(double ox, double oy, double spacing, int nx, int ny);
    static UniformGrid make3d(const Point& origin, double spacing, int nx, int ny, int nz);

    /// Throws ConfigError("degenerate grid ...") when dims or spacing are unusable.
    void validate() const;

    int cellsAlong(int axis) const { return axis < dim ? cells[axis] : 1; }
    int nodesAlong(int axis) const { return axis < dim ? cells[axis] + 1 : 1; }

    std::size_t elementCount() const;
    std::size_t vertexCount() const;

    std::size_t elementIndex(int i, int j, int k = 0) const
    {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(cellsAlong(0)) *
                   (static_cast<std::size_t>(j) + static_cast<std::size_t>(cellsAlong(1)) * k);
    }
    std::size_t vertexIndex(int i, int j, int k = 0) const
    {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(nodesAlong(0)) *
                   (static_cast<std::size_t>(j) + static_cast<std::size_t>(nodesAlong(1)) * k);
    }

    std::array<int, 3> elementCoords(std::size_t e) const;
    std::array<int, 3> vertexCoords(std::size_t v) const;

    Point vertexPosition(std::size_t v) const;
    Point elementCenter(std::size_t e) const;
    Point upperCorner() const;

    /// h^d, the measure of one cell.
    double cellMeasure() const;

    /// Vertex indices of element e (4 in 2D, counter-clockwise from the lower-left; 8 in 3D).
    std::vector<std::size_t> elementVertices(std::size_t e) const;

    bool operator==(const UniformGrid&) const = default;
};

enum class FieldKind { Binary, Scalar };

namespace detail {
struct ElementTag {};
struct VertexTag {};
} // namespace detail

/// Per-element or per-vertex scalar array tied to a grid. Binary fields hold only 0 and 1.
template <class Tag>
struct GridField {
    UniformGrid grid;
    std::vector<double> values;
    FieldKind kind = FieldKind::Scalar;

    static std::size_t expectedSize(const UniformGrid& g)
    {
        if constexpr (std::is_same_v<Tag, detail::ElementTag>)
            return g.elementCount();
        else
            return g.vertexCount();
    }

    static GridField filled(const UniformGrid& g, double value, FieldKind kind)
    {
        return GridField{g, std::vector<double>(expectedSize(g), value), kind};
    }

    static GridField fromValues(const UniformGrid& g, std::vector<double> values, FieldKind kind)
    {
        GridField f{g, std::move(values), kind};
        f.validate();
        return f;
    }

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
    bool solid(std::size_t i) const { return values[i] != 0.0; }

    void validate() const
    {
        if (values.size() != expectedSize(grid))
            throw ConfigError("field length " + std::to_string(values.size()) +
                              " does not match grid size " + std::to_string(expectedSize(grid)));
        if (kind == FieldKind::Binary)
            for (double v : values)
                if (v != 0.0 && v != 1.0)
                    throw ConfigError("binary field contains a value other than 0 or 1");
    }

    std::size_t countSolid() const
    {
        std::size_t n = 0;
        for (double v : values)
            n += v != 0.0;
        return n;
    }

    bool operator==(const GridField&) const = default;
};

using ElementField = GridField<detail::ElementTag>;
using VertexField = GridField<detail::VertexTag>;

/// Cell (element) whose half-open box contains p, or nullopt outside the grid.
std::optional<std::size_t> locateCell(const UniformGrid& grid, const Point& p);

/// Vertex value = max over incident elements.
VertexField elementToVertex(const ElementField& design);

/// Fraction of mask elements that are solid. Throws on an empty mask.
double volumeFraction(const ElementField& design, const ElementField& designMask);

/// Solid iff sens(e) > tau, or frozen(e) = 1.
ElementField extractLevelSet(const ElementField& sens, double tau, const ElementField& frozen);
ElementField extractLevelSet(const ElementField& sens, double tau);

} // namespace codesign
