#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "codesign/field_io.hpp"
#include "codesign/grid.hpp"

using namespace codesign;

namespace {

UniformGrid grid2x2()
{
    return UniformGrid::make2d(0.0, 0.0, 1.0, 2, 2);
}

} // namespace

TEST_CASE("grid counts elements and vertices")
{
    const UniformGrid g = UniformGrid::make2d(0.0, 0.0, 0.5, 3, 2);
    CHECK(g.elementCount() == 6);
    CHECK(g.vertexCount() == 12);
    const UniformGrid g3 = UniformGrid::make3d(Point::Zero(), 1.0, 2, 3, 4);
    CHECK(g3.elementCount() == 24);
    CHECK(g3.vertexCount() == 60);
    CHECK(g.elementVertices(g.elementIndex(1, 1)) ==
          std::vector<std::size_t>{g.vertexIndex(1, 1), g.vertexIndex(2, 1), g.vertexIndex(2, 2), g.vertexIndex(1, 2)});
}

TEST_CASE("degenerate grids are rejected")
{
    CHECK_THROWS_AS(UniformGrid::make2d(0.0, 0.0, 0.0, 2, 2), ConfigError);
    CHECK_THROWS_AS(UniformGrid::make2d(0.0, 0.0, 1.0, 0, 2), ConfigError);
    CHECK_THROWS_AS(UniformGrid::make2d(0.0, 0.0, -1.0, 2, 2), ConfigError);
}

TEST_CASE("locateCell examples")
{
    const UniformGrid g = grid2x2();
    CHECK(locateCell(g, Point(0.3, 0.3, 0.0)) == std::optional<std::size_t>(0));
    CHECK_FALSE(locateCell(g, Point(5.0, 5.0, 0.0)).has_value());
    CHECK(locateCell(g, Point(0.5, 0.0, 0.0)) == std::optional<std::size_t>(0));
}

TEST_CASE("locateCell assigns shared faces to the upper cell and excludes the far boundary")
{
    const UniformGrid g = grid2x2();
    CHECK(locateCell(g, Point(1.0, 0.5, 0.0)) == std::optional<std::size_t>(1));
    CHECK_FALSE(locateCell(g, Point(2.0, 0.5, 0.0)).has_value());
    CHECK_FALSE(locateCell(g, Point(-1e-15, 0.5, 0.0)).has_value());
    CHECK_FALSE(locateCell(g, Point(std::nan(""), 0.5, 0.0)).has_value());
}

TEST_CASE("locateCell partitions the domain: random points land in exactly the cell containing them")
{
    const UniformGrid g = UniformGrid::make2d(-1.0, 2.0, 0.25, 7, 5);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-2.0, 1.5);
    std::uniform_real_distribution<double> uy(1.0, 4.0);
    for (int k = 0; k < 2000; ++k) {
        const Point p(ux(rng), uy(rng), 0.0);
        const auto cell = locateCell(g, p);
        int hits = 0;
        for (std::size_t e = 0; e < g.elementCount(); ++e) {
            const Point lo = g.elementCenter(e) - Point(0.125, 0.125, 0.0);
            if (p.x() >= lo.x() && p.x() < lo.x() + 0.25 && p.y() >= lo.y() && p.y() < lo.y() + 0.25) {
                ++hits;
                REQUIRE(cell.has_value());
                CHECK(*cell == e);
            }
        }
        CHECK(hits <= 1);
        if (hits == 0)
            CHECK_FALSE(cell.has_value());
    }
}

TEST_CASE("elementToVertex uses the max rule")
{
    const UniformGrid g = grid2x2();
    CHECK(elementToVertex(ElementField::filled(g, 1.0, FieldKind::Binary)).countSolid() == 9);
    CHECK(elementToVertex(ElementField::filled(g, 0.0, FieldKind::Binary)).countSolid() == 0);
    ElementField one = ElementField::filled(g, 0.0, FieldKind::Binary);
    one.values[0] = 1.0;
    const VertexField v = elementToVertex(one);
    CHECK(v.countSolid() == 4);
    for (std::size_t idx : g.elementVertices(0))
        CHECK(v.solid(idx));
}

TEST_CASE("elementToVertex is monotone")
{
    const UniformGrid g = UniformGrid::make2d(0.0, 0.0, 1.0, 6, 5);
    std::mt19937_64 rng(3);
    std::bernoulli_distribution coin(0.3);
    for (int trial = 0; trial < 50; ++trial) {
        ElementField a = ElementField::filled(g, 0.0, FieldKind::Binary);
        for (double& x : a.values)
            x = coin(rng) ? 1.0 : 0.0;
        ElementField b = a;
        for (double& x : b.values)
            if (coin(rng))
                x = 1.0;
        const VertexField va = elementToVertex(a);
        const VertexField vb = elementToVertex(b);
        for (std::size_t i = 0; i < va.size(); ++i)
            if (va.solid(i))
                CHECK(vb.solid(i));
    }
}

TEST_CASE("volumeFraction examples")
{
    const UniformGrid g = UniformGrid::make2d(0.0, 0.0, 1.0, 10, 10);
    const ElementField mask = ElementField::filled(g, 1.0, FieldKind::Binary);
    CHECK(volumeFraction(mask, mask) == 1.0);
    ElementField half = mask;
    for (std::size_t e = 0; e < 50; ++e)
        half.values[e] = 0.0;
    CHECK(volumeFraction(half, mask) == 0.5);
    ElementField d93 = mask;
    for (std::size_t e = 0; e < 7; ++e)
        d93.values[e] = 0.0;
    CHECK(volumeFraction(d93, mask) == doctest::Approx(0.93).epsilon(1e-15));
    CHECK_THROWS_WITH_AS(volumeFraction(mask, ElementField::filled(g, 0.0, FieldKind::Binary)),
                         doctest::Contains("degenerate design domain"), ConfigError);
}

TEST_CASE("extractLevelSet examples")
{
    const UniformGrid g = UniformGrid::make2d(0.0, 0.0, 1.0, 4, 1);
    const ElementField s = ElementField::fromValues(g, {0.1, 0.2, 0.3, 0.4}, FieldKind::Scalar);
    CHECK(extractLevelSet(s, 0.25).values == std::vector<double>{0, 0, 1, 1});
    CHECK(extractLevelSet(s, -std::numeric_limits<double>::infinity()).countSolid() == 4);

    const UniformGrid g2 = UniformGrid::make2d(0.0, 0.0, 1.0, 2, 1);
    const ElementField s2 = ElementField::fromValues(g2, {0.1, 0.9}, FieldKind::Scalar);
    const ElementField frozen = ElementField::fromValues(g2, {1, 0}, FieldKind::Binary);
    CHECK(extractLevelSet(s2, 0.5, frozen).values == std::vector<double>{1, 1});
}

TEST_CASE("extractLevelSet is antitone in tau and its volume is a non-increasing step function")
{
    const UniformGrid g = UniformGrid::make2d(0.0, 0.0, 1.0, 8, 8);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n01;
    ElementField s = ElementField::filled(g, 0.0, FieldKind::Scalar);
    for (double& v : s.values)
        v = n01(rng);
    const ElementField mask = ElementField::filled(g, 1.0, FieldKind::Binary);
    double lastVolume = 2.0;
    ElementField previous = extractLevelSet(s, -10.0);
    for (double tau = -3.0; tau <= 3.0; tau += 0.05) {
        const ElementField cur = extractLevelSet(s, tau);
        for (std::size_t e = 0; e < cur.size(); ++e)
            if (cur.solid(e))
                CHECK(previous.solid(e));
        const double v = volumeFraction(cur, mask);
        CHECK(v <= lastVolume);
        lastVolume = v;
        previous = cur;
    }
}

TEST_CASE("binary fields reject non-binary values and wrong lengths")
{
    const UniformGrid g = grid2x2();
    CHECK_THROWS_AS(ElementField::fromValues(g, {0, 1, 0.5, 1}, FieldKind::Binary), ConfigError);
    CHECK_THROWS_AS(ElementField::fromValues(g, {0, 1, 0}, FieldKind::Binary), ConfigError);
    CHECK_THROWS_AS(VertexField::fromValues(g, std::vector<double>(4, 1.0), FieldKind::Binary), ConfigError);
}

TEST_CASE("field text files reload bit-identically in 2D and 3D")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const UniformGrid& g : {UniformGrid::make2d(-0.3, 1.0 / 3.0, 0.1, 5, 3),
                                 UniformGrid::make3d(Point(0.1, 0.2, 0.3), 0.7, 2, 3, 2)}) {
        std::vector<double> values(g.elementCount());
        for (double& v : values)
            v = u(rng) / 3.0;
        std::stringstream ss;
        writeFieldText(ss, g, values);
        const GridValues back = readFieldText(ss);
        CHECK(back.grid == g);
        CHECK(back.values == values);
    }
}

TEST_CASE("field text rejects truncated data")
{
    std::stringstream ss("2 2 1 0 0\n1 0\n");
    CHECK_THROWS(readFieldText(ss));
}
