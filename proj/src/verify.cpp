#include "codesign/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "codesign/collision_oracle.hpp"
#include "codesign/sensitivity.hpp"

namespace codesign {

std::vector<OracleComparison> compareWithOracle(const Assembly& assembly, int samplesPerCell)
{
    const std::size_t n = assembly.parts.size();
    std::vector<ElementField> rho;
    for (const Part& p : assembly.parts) {
        ElementField r = p.designMask;
        for (std::size_t e = 0; e < r.size(); ++e)
            r.values[e] = p.designMask.solid(e) && p.initial.solid(e) ? 1.0 : 0.0;
        rho.push_back(r);
    }
    std::vector<OracleComparison> out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            const Part& a = assembly.parts[i];
            const Part& b = assembly.parts[j];
            const RelativeTrajectory rel{a.trajectory, b.trajectory};
            OracleComparison c;
            c.stationary = i;
            c.moving = j;
            const auto t0 = std::chrono::steady_clock::now();
            const CollisionWeightMatrix w = assembleCWM(a.grid, b.grid, rel, assembly.settings.steps);
            c.measure = collisionMeasure(rho[i], w, elementToVertex(rho[j]));
            c.cwmSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            c.oracle = oracleCollision(rho[i], rho[j], rel, assembly.settings.steps, samplesPerCell);
            c.relativeError = c.oracle != 0.0 ? std::abs(c.measure - c.oracle) / c.oracle : std::abs(c.measure);
            out.push_back(c);
        }
    return out;
}

ElementField randomDesign(const UniformGrid& grid, double density, std::mt19937_64& rng)
{
    std::bernoulli_distribution coin(density);
    ElementField f = ElementField::filled(grid, 0.0, FieldKind::Binary);
    for (double& v : f.values)
        v = coin(rng) ? 1.0 : 0.0;
    return f;
}

GradientCheck checkGradientLinearity(const CollisionWeightMatrix& w, const ElementField& rhoE,
                                     const VertexField& rhoV, std::size_t maxFlips, std::mt19937_64& rng)
{
    std::vector<std::size_t> order(rhoE.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (maxFlips > 0 && maxFlips < order.size()) {
        std::shuffle(order.begin(), order.end(), rng);
        order.resize(maxFlips);
    }
    const std::int64_t base = collisionCount(rhoE, w, rhoV);
    const std::vector<std::int64_t> grad = weightedCounts(w, rhoV);
    GradientCheck r;
    ElementField flipped = rhoE;
    for (std::size_t e : order) {
        const bool wasSolid = flipped.solid(e);
        flipped.values[e] = wasSolid ? 0.0 : 1.0;
        const std::int64_t predicted = base + (wasSolid ? -grad[e] : grad[e]);
        r.maxDiscrepancy = std::max(r.maxDiscrepancy, std::abs(collisionCount(flipped, w, rhoV) - predicted));
        flipped.values[e] = wasSolid ? 1.0 : 0.0;
        ++r.flips;
    }
    return r;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v)
{
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]])
            ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

} // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size() || a.size() < 2)
        throw ConfigError("spearman: need two equally long samples of size >= 2");
    const std::vector<double> ra = ranks(a);
    const std::vector<double> rb = ranks(b);
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    return saa > 0.0 && sbb > 0.0 ? sab / std::sqrt(saa * sbb) : 0.0;
}

RankingCheck tsfRankingCheck(int nx, int ny, const Material& mat)
{
    const UniformGrid grid = UniformGrid::make2d(0.0, 0.0, 1.0, nx, ny);
    BoundaryConditions bc;
    bc.fixed.push_back(FixedDof{NodeSelector::edge("left"), true, true, {0.0, 0.0}});
    bc.loads.push_back(
        PointLoad{NodeSelector::nearest(Point(nx, 0.5 * ny, 0.0)), Eigen::Vector2d(0.0, -1.0)});
    LinearElasticSystem system(grid, mat, bc);
    ElementField rho = ElementField::filled(grid, 1.0, FieldKind::Binary);
    const FeaSolution base = system.solve(rho);
    const ElementField tsf = complianceTSF(base, mat, rho);

    RankingCheck r;
    for (std::size_t e = 0; e < grid.elementCount(); ++e) {
        const auto c = grid.elementCoords(e);
        if (c[0] == 0 || c[1] == 0 || c[0] == nx - 1 || c[1] == ny - 1)
            continue;
        rho.values[e] = 0.0;
        const double f = system.solve(rho).compliance;
        rho.values[e] = 1.0;
        r.tsf.push_back(tsf.values[e]);
        r.complianceIncrease.push_back(f - base.compliance);
    }
    r.elements = r.tsf.size();
    r.spearman = spearman(r.tsf, r.complianceIncrease);
    return r;
}

} // namespace codesign
