#include "codesign/grid.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace codesign {

UniformGrid UniformGrid::make2d(double ox, double oy, double spacing, int nx, int ny)
{
    UniformGrid g;
    g.dim = 2;
    g.origin = {ox, oy, 0.0};
    g.spacing = spacing;
    g.cells = {nx, ny, 1};
    g.validate();
    return g;
}

UniformGrid UniformGrid::make3d(const Point& origin, double spacing, int nx, int ny, int nz)
{
    UniformGrid g;
    g.dim = 3;
    g.origin = {origin.x(), origin.y(), origin.z()};
    g.spacing = spacing;
    g.cells = {nx, ny, nz};
    g.validate();
    return g;
}

void UniformGrid::validate() const
{
    if (dim != 2 && dim != 3)
        throw ConfigError("degenerate grid: dimension must be 2 or 3, got " + std::to_string(dim));
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw ConfigError("degenerate grid: spacing must be positive and finite");
    for (int a = 0; a < dim; ++a) {
        if (cells[a] < 1)
            throw ConfigError("degenerate grid: element count along axis " + std::to_string(a) +
                              " must be at least 1");
        if (!std::isfinite(origin[a]))
            throw ConfigError("degenerate grid: origin must be finite");
    }
    if (dim == 2 && cells[2] != 1)
        throw ConfigError("degenerate grid: 2D grid must have a single layer in z");
}

std::size_t UniformGrid::elementCount() const
{
    return static_cast<std::size_t>(cellsAlong(0)) * cellsAlong(1) * cellsAlong(2);
}

std::size_t UniformGrid::vertexCount() const
{
    return static_cast<std::size_t>(nodesAlong(0)) * nodesAlong(1) * nodesAlong(2);
}

std::array<int, 3> UniformGrid::elementCoords(std::size_t e) const
{
    const auto nx = static_cast<std::size_t>(cellsAlong(0));
    const auto ny = static_cast<std::size_t>(cellsAlong(1));
    return {static_cast<int>(e % nx), static_cast<int>((e / nx) % ny), static_cast<int>(e / (nx * ny))};
}

std::array<int, 3> UniformGrid::vertexCoords(std::size_t v) const
{
    const auto nx = static_cast<std::size_t>(nodesAlong(0));
    const auto ny = static_cast<std::size_t>(nodesAlong(1));
    return {static_cast<int>(v % nx), static_cast<int>((v / nx) % ny), static_cast<int>(v / (nx * ny))};
}

Point UniformGrid::vertexPosition(std::size_t v) const
{
    const auto c = vertexCoords(v);
    Point p = Point::Zero();
    for (int a = 0; a < dim; ++a)
        p[a] = origin[a] + spacing * c[a];
    return p;
}

Point UniformGrid::elementCenter(std::size_t e) const
{
    const auto c = elementCoords(e);
    Point p = Point::Zero();
    for (int a = 0; a < dim; ++a)
        p[a] = origin[a] + spacing * (c[a] + 0.5);
    return p;
}

Point UniformGrid::upperCorner() const
{
    Point p = Point::Zero();
    for (int a = 0; a < dim; ++a)
        p[a] = origin[a] + spacing * cells[a];
    return p;
}

double UniformGrid::cellMeasure() const
{
    return dim == 2 ? spacing * spacing : spacing * spacing * spacing;
}

std::vector<std::size_t> UniformGrid::elementVertices(std::size_t e) const
{
    const auto [i, j, k] = elementCoords(e);
    if (dim == 2)
        return {vertexIndex(i, j), vertexIndex(i + 1, j), vertexIndex(i + 1, j + 1), vertexIndex(i, j + 1)};
    return {vertexIndex(i, j, k),         vertexIndex(i + 1, j, k),         vertexIndex(i + 1, j + 1, k),
            vertexIndex(i, j + 1, k),     vertexIndex(i, j, k + 1),         vertexIndex(i + 1, j, k + 1),
            vertexIndex(i + 1, j + 1, k + 1), vertexIndex(i, j + 1, k + 1)};
}

std::optional<std::size_t> locateCell(const UniformGrid& grid, const Point& p)
{
    std::array<int, 3> idx{0, 0, 0};
    for (int a = 0; a < grid.dim; ++a) {
        const double u = (p[a] - grid.origin[a]) / grid.spacing;
        // NaN fails both comparisons below and is rejected here.
        if (!(u >= 0.0) || !(u < static_cast<double>(grid.cells[a])))
            return std::nullopt;
        idx[a] = static_cast<int>(u);
        if (idx[a] >= grid.cells[a])
            return std::nullopt;
    }
    return grid.elementIndex(idx[0], idx[1], idx[2]);
}

VertexField elementToVertex(const ElementField& design)
{
    VertexField out = VertexField::filled(design.grid, 0.0, design.kind);
    const std::size_t ne = design.grid.elementCount();
    for (std::size_t e = 0; e < ne; ++e) {
        const double v = design.values[e];
        if (v == 0.0)
            continue;
        for (std::size_t vi : design.grid.elementVertices(e))
            out.values[vi] = std::max(out.values[vi], v);
    }
    return out;
}

double volumeFraction(const ElementField& design, const ElementField& designMask)
{
    if (design.grid != designMask.grid)
        throw ConfigError("volumeFraction: design and mask live on different grids");
    std::size_t inMask = 0;
    std::size_t solid = 0;
    for (std::size_t e = 0; e < design.size(); ++e) {
        if (designMask.values[e] == 0.0)
            continue;
        ++inMask;
        solid += design.values[e] != 0.0;
    }
    if (inMask == 0)
        throw ConfigError("degenerate design domain: design mask is empty");
    return static_cast<double>(solid) / static_cast<double>(inMask);
}

ElementField extractLevelSet(const ElementField& sens, double tau, const ElementField& frozen)
{
    if (sens.grid != frozen.grid)
        throw ConfigError("extractLevelSet: sensitivity and frozen fields live on different grids");
    ElementField out = ElementField::filled(sens.grid, 0.0, FieldKind::Binary);
    for (std::size_t e = 0; e < sens.size(); ++e)
        out.values[e] = (sens.values[e] > tau || frozen.values[e] != 0.0) ? 1.0 : 0.0;
    return out;
}

ElementField extractLevelSet(const ElementField& sens, double tau)
{
    return extractLevelSet(sens, tau, ElementField::filled(sens.grid, 0.0, FieldKind::Binary));
}

} // namespace codesign
