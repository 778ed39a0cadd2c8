#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "codesign/fea.hpp"
#include "codesign/sensitivity.hpp"
#include "codesign/verify.hpp"

using namespace codesign;

namespace {

std::vector<std::size_t> argsort(const std::vector<double>& v)
{
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    return idx;
}

BoundaryConditions cantilever(const UniformGrid& g, double load)
{
    BoundaryConditions bc;
    bc.fixed.push_back(FixedDof{NodeSelector::edge("left"), true, true, {0.0, 0.0}});
    bc.loads.push_back(PointLoad{NodeSelector::nearest(Point(g.cells[0] * g.spacing, g.cells[1] * g.spacing / 2, 0.0)),
                                 {0.0, -load}});
    return bc;
}

} // namespace

TEST_CASE("uniaxial unit stress gives 273/91")
{
    CentroidState s;
    s.stress(0, 0) = 1.0;
    s.strain(0, 0) = 1.0;
    s.strain(1, 1) = -0.3;
    CHECK(std::abs(complianceTSFValue(s, 0.3) - 273.0 / 91.0) <= 1e-10);
    CHECK(std::abs(complianceTSFValue(s, 0.3) - 3.0) <= 1e-10);
    CHECK(complianceTSFValue(CentroidState{}, 0.3) == 0.0);
}

TEST_CASE("TSF of a single element under uniaxial tension matches the closed form")
{
    const UniformGrid g = UniformGrid::make2d(0.0, 0.0, 1.0, 1, 1);
    BoundaryConditions bc;
    bc.fixed.push_back(FixedDof{NodeSelector::edge("left"), true, false, {0.0, 0.0}});
    bc.fixed.push_back(FixedDof{NodeSelector::corner("bottom-left"), true, true, {0.0, 0.0}});
    bc.loads.push_back(PointLoad{NodeSelector::edge("right"), {1.0, 0.0}});
    Material mat;
    mat.youngs = 1.0;
    const ElementField rho = ElementField::filled(g, 1.0, FieldKind::Binary);
    const FeaSolution sol = assembleAndSolve(g, rho, mat, bc);
    CHECK(std::abs(complianceTSF(sol, mat, rho).values[0] - 3.0) <= 1e-6);
}

TEST_CASE("scaling the load by c scales the TSF by c squared and keeps the ranking")
{
    const UniformGrid g = UniformGrid::make2d(0.0, 0.0, 1.0, 8, 4);
    const ElementField rho = ElementField::filled(g, 1.0, FieldKind::Binary);
    const Material mat;
    const ElementField t1 = complianceTSF(assembleAndSolve(g, rho, mat, cantilever(g, 1.0)), mat, rho);
    const ElementField t3 = complianceTSF(assembleAndSolve(g, rho, mat, cantilever(g, 3.0)), mat, rho);
    for (std::size_t e = 0; e < t1.size(); ++e)
        CHECK(std::abs(t3.values[e] - 9.0 * t1.values[e]) <= 1e-9 * std::max(1.0, std::abs(t3.values[e])));
    const ElementField n1 = normalize(t1, rho);
    const ElementField n3 = normalize(t3, rho);
    for (std::size_t e = 0; e < n1.size(); ++e)
        CHECK(std::abs(n1.values[e] - n3.values[e]) <= 1e-12);
}

TEST_CASE("void elements carry zero TSF")
{
    const UniformGrid g = UniformGrid::make2d(0.0, 0.0, 1.0, 6, 3);
    ElementField rho = ElementField::filled(g, 1.0, FieldKind::Binary);
    rho.values[g.elementIndex(2, 1)] = 0.0;
    const Material mat;
    const ElementField t = complianceTSF(assembleAndSolve(g, rho, mat, cantilever(g, 1.0)), mat, rho);
    CHECK(t.values[g.elementIndex(2, 1)] == 0.0);
}

TEST_CASE("normalize examples")
{
    const UniformGrid g = UniformGrid::make2d(0.0, 0.0, 1.0, 3, 1);
    const ElementField mask = ElementField::filled(g, 1.0, FieldKind::Binary);
    CHECK(normalize(ElementField::fromValues(g, {2, 4, 6}, FieldKind::Scalar), mask).values ==
          std::vector<double>{0.0, 0.5, 1.0});
    CHECK(normalize(ElementField::filled(g, 7.0, FieldKind::Scalar), mask).values == std::vector<double>{1, 1, 1});
    const ElementField partial = ElementField::fromValues(g, {1, 0, 1}, FieldKind::Binary);
    CHECK(normalize(ElementField::fromValues(g, {2, -100, 6}, FieldKind::Scalar), partial).values ==
          std::vector<double>{0.0, 0.0, 1.0});
}

TEST_CASE("normalize preserves the ordering of a field")
{
    const UniformGrid g = UniformGrid::make2d(0.0, 0.0, 1.0, 7, 7);
    const ElementField mask = ElementField::filled(g, 1.0, FieldKind::Binary);
    std::mt19937_64 rng(13);
    std::normal_distribution<double> n(0.0, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        ElementField f = ElementField::filled(g, 0.0, FieldKind::Scalar);
        for (double& v : f.values)
            v = n(rng);
        const ElementField out = normalize(f, mask);
        CHECK(argsort(out.values) == argsort(f.values));
        CHECK(*std::min_element(out.values.begin(), out.values.end()) == 0.0);
        CHECK(*std::max_element(out.values.begin(), out.values.end()) == 1.0);
    }
}

TEST_CASE("augment examples")
{
    const UniformGrid g = UniformGrid::make2d(0.0, 0.0, 1.0, 4, 1);
    const ElementField tsf = ElementField::fromValues(g, {0.1, 0.9, 0.4, 0.0}, FieldKind::Scalar);
    const ElementField tg = ElementField::fromValues(g, {0.0, 1.0, 0.5, 1.0}, FieldKind::Scalar);
    CHECK(augment(tsf, tg, 0.0).values == tsf.values);
    const ElementField ones = ElementField::filled(g, 1.0, FieldKind::Scalar);
    CHECK(argsort(augment(tsf, ones, 0.7).values) == argsort(tsf.values));
    const ElementField a = augment(tsf, tg, 0.5);
    for (std::size_t e = 0; e < 4; ++e)
        CHECK(a.values[e] == tsf.values[e] + 0.5 * tg.values[e]);
    CHECK_THROWS_AS(augment(tsf, tg, -1.0), ConfigError);
}

TEST_CASE("raising lambda pushes colliding elements below non-colliding ones of equal TSF")
{
    const UniformGrid g = UniformGrid::make2d(0.0, 0.0, 1.0, 2, 1);
    const ElementField tsf = ElementField::fromValues(g, {0.4, 0.4}, FieldKind::Scalar);
    const ElementField tg = ElementField::fromValues(g, {0.3, 1.0}, FieldKind::Scalar);
    double lastGap = 0.0;
    for (double lambda : {0.05, 0.2, 0.5, 1.0}) {
        const ElementField a = augment(tsf, tg, lambda);
        const double gap = a.values[1] - a.values[0];
        CHECK(gap > lastGap);
        lastGap = gap;
    }
}

TEST_CASE("makeSensitivity bundles the fields")
{
    const UniformGrid g = UniformGrid::make2d(0.0, 0.0, 1.0, 6, 3);
    const ElementField rho = ElementField::filled(g, 1.0, FieldKind::Binary);
    const Material mat;
    const FeaSolution sol = assembleAndSolve(g, rho, mat, cantilever(g, 1.0));
    ElementField tg = ElementField::filled(g, 1.0, FieldKind::Scalar);
    tg.values[3] = 0.25;
    const SensitivityBundle b = makeSensitivity(&sol, mat, rho, tg, 0.5);
    for (std::size_t e = 0; e < rho.size(); ++e)
        CHECK(b.augmented.values[e] == b.complianceTSFNorm.values[e] + 0.5 * tg.values[e]);
    const SensitivityBundle off = makeSensitivity(nullptr, mat, rho, tg, 0.5, false);
    for (std::size_t e = 0; e < rho.size(); ++e)
        CHECK(off.augmented.values[e] == 0.5 * tg.values[e]);
}

TEST_CASE("TSF ranking follows the exact compliance increase on a small cantilever")
{
    const RankingCheck r = tsfRankingCheck(10, 10);
    CHECK(r.elements == 64);
    CHECK(r.spearman >= 0.8);
}

TEST_CASE("spearman handles ties and perfect orderings")
{
    CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
    CHECK(spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
    CHECK(spearman({1, 1, 2, 3}, {5, 5, 6, 7}) == doctest::Approx(1.0));
}
