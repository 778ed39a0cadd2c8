#include "codesign/fea.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "codesign/parallel.hpp"

namespace codesign {

void Material::validate() const
{
    if (!(youngs > 0.0) || !std::isfinite(youngs))
        throw ConfigError("material: Young's modulus must be positive");
    if (!(poisson >= 0.0 && poisson < 0.5))
        throw ConfigError("material: Poisson's ratio must lie in [0, 0.5)");
    if (!(ersatz > 0.0 && ersatz < 1e-2))
        throw ConfigError("material: ersatz factor must lie in (0, 1e-2)");
}

// ---------------------------------------------------------------------------
// Node selectors

NodeSelector NodeSelector::corner(std::string name)
{
    NodeSelector s;
    s.kind = Kind::Corner;
    s.name = std::move(name);
    return s;
}

NodeSelector NodeSelector::edge(std::string name)
{
    NodeSelector s;
    s.kind = Kind::Edge;
    s.name = std::move(name);
    return s;
}

NodeSelector NodeSelector::nearest(const Point& p)
{
    NodeSelector s;
    s.kind = Kind::Point;
    s.point = p;
    return s;
}

NodeSelector NodeSelector::hole(const Point& center, double radius)
{
    NodeSelector s;
    s.kind = Kind::Hole;
    s.point = center;
    s.radius = radius;
    return s;
}

NodeSelector NodeSelector::explicitNodes(std::vector<std::size_t> nodes)
{
    NodeSelector s;
    s.kind = Kind::Nodes;
    s.nodes = std::move(nodes);
    return s;
}

std::vector<std::size_t> NodeSelector::resolve(const UniformGrid& grid, const ElementField& designMask) const
{
    const int nx = grid.cells[0];
    const int ny = grid.cells[1];
    std::vector<std::size_t> out;
    switch (kind) {
    case Kind::Corner:
        if (name == "bottom-left")
            out = {grid.vertexIndex(0, 0)};
        else if (name == "bottom-right")
            out = {grid.vertexIndex(nx, 0)};
        else if (name == "top-left")
            out = {grid.vertexIndex(0, ny)};
        else if (name == "top-right")
            out = {grid.vertexIndex(nx, ny)};
        else
            throw ConfigError("unknown corner '" + name + "' (expected bottom-left, bottom-right, top-left, top-right)");
        break;
    case Kind::Edge:
        if (name == "bottom" || name == "top") {
            const int j = name == "bottom" ? 0 : ny;
            for (int i = 0; i <= nx; ++i)
                out.push_back(grid.vertexIndex(i, j));
        } else if (name == "left" || name == "right") {
            const int i = name == "left" ? 0 : nx;
            for (int j = 0; j <= ny; ++j)
                out.push_back(grid.vertexIndex(i, j));
        } else {
            throw ConfigError("unknown edge '" + name + "' (expected bottom, top, left, right)");
        }
        break;
    case Kind::Point: {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t v = 0; v < grid.vertexCount(); ++v) {
            const double d = (grid.vertexPosition(v) - point).squaredNorm();
            if (d < best) {
                best = d;
                arg = v;
            }
        }
        out = {arg};
        break;
    }
    case Kind::Hole: {
        std::vector<unsigned char> inside(grid.vertexCount(), 0);
        std::vector<unsigned char> outside(grid.vertexCount(), 0);
        for (std::size_t e = 0; e < grid.elementCount(); ++e)
            for (std::size_t v : grid.elementVertices(e))
                (designMask.solid(e) ? inside : outside)[v] = 1;
        for (std::size_t v = 0; v < grid.vertexCount(); ++v)
            if (inside[v] && outside[v] && (grid.vertexPosition(v) - point).norm() <= radius)
                out.push_back(v);
        break;
    }
    case Kind::Nodes:
        for (std::size_t v : nodes)
            if (v >= grid.vertexCount())
                throw ConfigError("node selector: vertex " + std::to_string(v) + " is out of range");
        out = nodes;
        break;
    }
    if (out.empty())
        throw ConfigError("node selector resolves to no vertices");
    return out;
}

// ---------------------------------------------------------------------------
// Element kernels

namespace {

constexpr double kXi[4] = {-1.0, 1.0, 1.0, -1.0};
constexpr double kEta[4] = {-1.0, -1.0, 1.0, 1.0};

Eigen::Matrix3d planeStress(const Material& mat)
{
    const double nu = mat.poisson;
    Eigen::Matrix3d d;
    d << 1.0, nu, 0.0, nu, 1.0, 0.0, 0.0, 0.0, 0.5 * (1.0 - nu);
    return d * (mat.youngs / (1.0 - nu * nu));
}

/// Strain-displacement matrix (engineering shear) of a square element of side h at (xi, eta).
Eigen::Matrix<double, 3, 8> strainDisplacement(double h, double xi, double eta)
{
    Eigen::Matrix<double, 3, 8> b = Eigen::Matrix<double, 3, 8>::Zero();
    for (int a = 0; a < 4; ++a) {
        const double dx = 0.25 * kXi[a] * (1.0 + eta * kEta[a]) * 2.0 / h;
        const double dy = 0.25 * kEta[a] * (1.0 + xi * kXi[a]) * 2.0 / h;
        b(0, 2 * a) = dx;
        b(1, 2 * a + 1) = dy;
        b(2, 2 * a) = dy;
        b(2, 2 * a + 1) = dx;
    }
    return b;
}

} // namespace

Eigen::Matrix<double, 8, 8> quadStiffness(const Material& mat, double side)
{
    const Eigen::Matrix3d d = planeStress(mat);
    const double g = 1.0 / std::sqrt(3.0);
    const double detJ = 0.25 * side * side;
    Eigen::Matrix<double, 8, 8> k = Eigen::Matrix<double, 8, 8>::Zero();
    for (double xi : {-g, g})
        for (double eta : {-g, g}) {
            const auto b = strainDisplacement(side, xi, eta);
            k += b.transpose() * d * b * detJ;
        }
    return k;
}

std::vector<CentroidState> recoverCentroidState(const UniformGrid& grid, const std::vector<double>& displacement,
                                                const std::vector<double>& modulusScale, const Material& mat)
{
    if (grid.dim != 2)
        throw ConfigError("centroid recovery supports 2D grids only");
    const auto b = strainDisplacement(grid.spacing, 0.0, 0.0);
    const Eigen::Matrix3d d = planeStress(mat);
    const std::size_t ne = grid.elementCount();
    std::vector<CentroidState> out(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        const auto verts = grid.elementVertices(e);
        Eigen::Matrix<double, 8, 1> ue;
        for (int a = 0; a < 4; ++a) {
            ue(2 * a) = displacement[2 * verts[a]];
            ue(2 * a + 1) = displacement[2 * verts[a] + 1];
        }
        const Eigen::Vector3d strain = b * ue;
        const Eigen::Vector3d stress = modulusScale[e] * (d * strain);
        out[e].strain << strain(0), 0.5 * strain(2), 0.5 * strain(2), strain(1);
        out[e].stress << stress(0), stress(2), stress(2), stress(1);
    }
    return out;
}

std::vector<CentroidState> recoverCentroidState(const FeaSolution& sol, const Material& mat)
{
    return recoverCentroidState(sol.grid, sol.displacement, sol.modulusScale, mat);
}

double FeaSolution::maxDisplacement() const
{
    double m = 0.0;
    for (std::size_t v = 0; 2 * v + 1 < displacement.size(); ++v)
        m = std::max(m, nodeDisplacement(v).norm());
    return m;
}

double FeaSolution::maxVonMises() const
{
    double m = 0.0;
    for (const CentroidState& c : centroid) {
        const auto& s = c.stress;
        m = std::max(m, std::sqrt(s(0, 0) * s(0, 0) - s(0, 0) * s(1, 1) + s(1, 1) * s(1, 1) + 3.0 * s(0, 1) * s(0, 1)));
    }
    return m;
}

ElementField frozenElements(const UniformGrid& grid, const BoundaryConditions& bc, const ElementField& designMask)
{
    std::vector<unsigned char> marked(grid.vertexCount(), 0);
    for (const FixedDof& f : bc.fixed)
        for (std::size_t v : f.nodes.resolve(grid, designMask))
            marked[v] = 1;
    for (const PointLoad& l : bc.loads)
        for (std::size_t v : l.nodes.resolve(grid, designMask))
            marked[v] = 1;
    ElementField frozen = ElementField::filled(grid, 0.0, FieldKind::Binary);
    for (std::size_t e = 0; e < grid.elementCount(); ++e) {
        if (!designMask.solid(e))
            continue;
        for (std::size_t v : grid.elementVertices(e))
            if (marked[v]) {
                frozen.values[e] = 1.0;
                break;
            }
    }
    return frozen;
}

// ---------------------------------------------------------------------------
// System

namespace {
constexpr std::size_t kDirectSolverLimit = 50000;
}

struct LinearElasticSystem::Impl {
    using SpMat = Eigen::SparseMatrix<double>;

    Eigen::Matrix<double, 8, 8> ke;
    std::vector<std::ptrdiff_t> freeIndex; // -1 for prescribed DOFs
    std::vector<double> prescribed;        // value per DOF (0 when free)
    std::vector<double> load;              // full-length nodal force vector
    std::size_t nFree = 0;
    SpMat k;
    // For each element, 64 slots into k.valuePtr() (-1 when either DOF is prescribed).
    std::vector<std::ptrdiff_t> slots;
    Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> direct;
    bool analyzed = false;
};

LinearElasticSystem::LinearElasticSystem(UniformGrid grid, Material mat, BoundaryConditions bc)
    : LinearElasticSystem(grid, mat, std::move(bc), ElementField::filled(grid, 1.0, FieldKind::Binary))
{
}

LinearElasticSystem::LinearElasticSystem(UniformGrid grid, Material mat, BoundaryConditions bc,
                                         const ElementField& designMask)
    : grid_(std::move(grid)), material_(mat), impl_(std::make_unique<Impl>())
{
    grid_.validate();
    material_.validate();
    if (grid_.dim != 2)
        throw ConfigError("linear elasticity supports 2D grids only");
    if (designMask.grid != grid_)
        throw ConfigError("design mask lives on a different grid");

    Impl& m = *impl_;
    const std::size_t nv = grid_.vertexCount();
    const std::size_t ndof = 2 * nv;
    m.ke = quadStiffness(material_, grid_.spacing);

    std::vector<unsigned char> fixed(ndof, 0);
    m.prescribed.assign(ndof, 0.0);
    bool anyX = false;
    bool anyY = false;
    for (const FixedDof& f : bc.fixed)
        for (std::size_t v : f.nodes.resolve(grid_, designMask)) {
            if (f.fixX) {
                fixed[2 * v] = 1;
                m.prescribed[2 * v] = f.value.x();
                anyX = true;
            }
            if (f.fixY) {
                fixed[2 * v + 1] = 1;
                m.prescribed[2 * v + 1] = f.value.y();
                anyY = true;
            }
        }
    const auto constrained = static_cast<std::size_t>(std::count(fixed.begin(), fixed.end(), 1));
    if (constrained < 3 || !anyX || !anyY)
        throw FeaError("singular system: insufficient constraints (need at least 3 fixed DOFs covering both axes, "
                       "got " + std::to_string(constrained) + ")");

    m.load.assign(ndof, 0.0);
    for (const PointLoad& l : bc.loads) {
        const auto nodes = l.nodes.resolve(grid_, designMask);
        for (std::size_t v : nodes) {
            m.load[2 * v] += l.force.x() / static_cast<double>(nodes.size());
            m.load[2 * v + 1] += l.force.y() / static_cast<double>(nodes.size());
        }
    }

    m.freeIndex.assign(ndof, -1);
    for (std::size_t d = 0; d < ndof; ++d)
        if (!fixed[d])
            m.freeIndex[d] = static_cast<std::ptrdiff_t>(m.nFree++);
    if (m.nFree == 0)
        throw FeaError("singular system: every degree of freedom is prescribed");

    // Symbolic pattern from a unit assembly, then map every element entry to its slot.
    const std::size_t ne = grid_.elementCount();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(ne * 64);
    for (std::size_t e = 0; e < ne; ++e) {
        const auto verts = grid_.elementVertices(e);
        for (int a = 0; a < 8; ++a) {
            const auto ra = m.freeIndex[2 * verts[a / 2] + a % 2];
            if (ra < 0)
                continue;
            for (int b = 0; b < 8; ++b) {
                const auto cb = m.freeIndex[2 * verts[b / 2] + b % 2];
                if (cb >= 0)
                    trip.emplace_back(static_cast<int>(ra), static_cast<int>(cb), 1.0);
            }
        }
    }
    m.k.resize(static_cast<Eigen::Index>(m.nFree), static_cast<Eigen::Index>(m.nFree));
    m.k.setFromTriplets(trip.begin(), trip.end());
    m.k.makeCompressed();

    m.slots.assign(ne * 64, -1);
    const int* outer = m.k.outerIndexPtr();
    const int* inner = m.k.innerIndexPtr();
    for (std::size_t e = 0; e < ne; ++e) {
        const auto verts = grid_.elementVertices(e);
        for (int a = 0; a < 8; ++a) {
            const auto ra = m.freeIndex[2 * verts[a / 2] + a % 2];
            if (ra < 0)
                continue;
            for (int b = 0; b < 8; ++b) {
                const auto cb = m.freeIndex[2 * verts[b / 2] + b % 2];
                if (cb < 0)
                    continue;
                const int* first = inner + outer[cb];
                const int* last = inner + outer[cb + 1];
                const int* it = std::lower_bound(first, last, static_cast<int>(ra));
                m.slots[e * 64 + static_cast<std::size_t>(a * 8 + b)] = it - inner;
            }
        }
    }
}

LinearElasticSystem::~LinearElasticSystem() = default;
LinearElasticSystem::LinearElasticSystem(LinearElasticSystem&&) noexcept = default;
LinearElasticSystem& LinearElasticSystem::operator=(LinearElasticSystem&&) noexcept = default;

std::size_t LinearElasticSystem::freeDofs() const
{
    return impl_->nFree;
}

FeaSolution LinearElasticSystem::solve(const ElementField& rho)
{
    if (rho.grid != grid_)
        throw ConfigError("design lives on a different grid than the elastic system");
    Impl& m = *impl_;
    const std::size_t ne = grid_.elementCount();
    const std::size_t ndof = 2 * grid_.vertexCount();

    FeaSolution sol;
    sol.grid = grid_;
    sol.modulusScale.resize(ne);
    for (std::size_t e = 0; e < ne; ++e)
        sol.modulusScale[e] = rho.values[e] + material_.ersatz * (1.0 - rho.values[e]);

    // Numeric assembly into the fixed pattern, plus the lifting of prescribed values.
    double* values = m.k.valuePtr();
    std::fill(values, values + m.k.nonZeros(), 0.0);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(m.nFree));
    for (std::size_t d = 0; d < ndof; ++d)
        if (m.freeIndex[d] >= 0)
            rhs(m.freeIndex[d]) = m.load[d];
    for (std::size_t e = 0; e < ne; ++e) {
        const double s = sol.modulusScale[e];
        const auto verts = grid_.elementVertices(e);
        const std::ptrdiff_t* slot = &m.slots[e * 64];
        for (int a = 0; a < 8; ++a) {
            const std::size_t da = 2 * verts[a / 2] + a % 2;
            const auto ra = m.freeIndex[da];
            for (int b = 0; b < 8; ++b) {
                const double kab = s * m.ke(a, b);
                if (slot[a * 8 + b] >= 0) {
                    values[slot[a * 8 + b]] += kab;
                } else if (ra >= 0) {
                    const std::size_t db = 2 * verts[b / 2] + b % 2;
                    if (m.freeIndex[db] < 0)
                        rhs(ra) -= kab * m.prescribed[db];
                }
            }
        }
    }

    Eigen::VectorXd u;
    if (m.nFree <= kDirectSolverLimit) {
        if (!m.analyzed) {
            m.direct.analyzePattern(m.k);
            m.analyzed = true;
        }
        m.direct.factorize(m.k);
        if (m.direct.info() != Eigen::Success)
            throw FeaError("singular system: factorization failed");
        const Eigen::VectorXd diag = m.direct.vectorD();
        const double dmax = diag.cwiseAbs().maxCoeff();
        if (!(diag.minCoeff() > 1e-14 * dmax))
            throw FeaError("singular system: stiffness matrix has a zero or negative pivot "
                           "(unconstrained rigid-body mode)");
        u = m.direct.solve(rhs);
        const Eigen::VectorXd r = rhs - m.k * u;
        if (r.norm() > 1e-12 * rhs.norm())
            u += m.direct.solve(r);
    } else {
        Eigen::ConjugateGradient<Impl::SpMat, Eigen::Lower | Eigen::Upper, Eigen::IncompleteCholesky<double>> cg;
        cg.setTolerance(1e-11);
        cg.setMaxIterations(static_cast<Eigen::Index>(10 * m.nFree));
        cg.compute(m.k);
        if (cg.info() != Eigen::Success)
            throw FeaError("singular system: preconditioner setup failed");
        u = cg.solve(rhs);
        if (cg.info() != Eigen::Success)
            throw FeaError("iterative solve did not converge");
    }
    const double rhsNorm = rhs.norm();
    sol.residual = rhsNorm > 0.0 ? (m.k * u - rhs).norm() / rhsNorm : (m.k * u - rhs).norm();

    sol.displacement.assign(ndof, 0.0);
    for (std::size_t d = 0; d < ndof; ++d)
        sol.displacement[d] = m.freeIndex[d] >= 0 ? u(m.freeIndex[d]) : m.prescribed[d];
    double compliance = 0.0;
    for (std::size_t d = 0; d < ndof; ++d)
        compliance += m.load[d] * sol.displacement[d];
    sol.compliance = compliance;
    if (!std::isfinite(sol.compliance))
        throw FeaError("singular system: non-finite compliance");
    sol.centroid = recoverCentroidState(sol, material_);
    ++solves_;
    return sol;
}

FeaSolution assembleAndSolve(const UniformGrid& grid, const ElementField& rho, const Material& mat,
                             const BoundaryConditions& bc)
{
    LinearElasticSystem system(grid, mat, bc);
    return system.solve(rho);
}

} // namespace codesign
