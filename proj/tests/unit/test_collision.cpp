#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "codesign/collision.hpp"
#include "codesign/collision_oracle.hpp"
#include "codesign/config.hpp"
#include "codesign/scenarios.hpp"
#include "codesign/verify.hpp"

using namespace codesign;

namespace {

constexpr double kPi = std::numbers::pi;

ElementField solid(const UniformGrid& g)
{
    return ElementField::filled(g, 1.0, FieldKind::Binary);
}

Trajectory slide(double dx)
{
    KeyframeMotion m;
    Keyframe a;
    Keyframe b;
    b.t = 1.0;
    b.translation = Point(dx, 0.0, 0.0);
    m.frames = {a, b};
    return Trajectory::keyframes(m);
}

} // namespace

TEST_CASE("single-element grids under identity motion give an entry of 1")
{
    const UniformGrid g = UniformGrid::make2d(-0.5, -0.5, 1.0, 1, 1);
    const UniformGrid m = UniformGrid::make2d(-1.0, -1.0, 1.0, 2, 2);
    for (int k : {1, 7, 1000}) {
        const CollisionWeightMatrix w = assembleCWM(g, m, {}, k);
        CHECK(w.entry(0, m.vertexIndex(1, 1)) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(w.count(0, m.vertexIndex(1, 1)) == static_cast<std::uint32_t>(k));
    }
}

TEST_CASE("grids displaced by ten cells never meet")
{
    const UniformGrid a = UniformGrid::make2d(0.0, 0.0, 1.0, 3, 3);
    const UniformGrid b = UniformGrid::make2d(13.0, 0.0, 1.0, 3, 3);
    const CollisionWeightMatrix w = assembleCWM(a, b, {}, 100);
    CHECK(w.nonZeros() == 0);
}

TEST_CASE("coincident static unit squares measure 1")
{
    const double h = 1.0 / 32;
    const UniformGrid g = UniformGrid::make2d(0.0, 0.0, h, 32, 32);
    const CollisionWeightMatrix w = assembleCWM(g, g, {}, 1000);
    const double m = collisionMeasure(solid(g), w, elementToVertex(solid(g)));
    CHECK(std::abs(m - 1.0) <= 2 * h);
}

TEST_CASE("translating squares measure 0.25 within 5%")
{
    const Assembly a = buildAssembly(builtinScenario("translating-squares"));
    const auto& A = a.parts[0];
    const auto& B = a.parts[1];
    const CollisionWeightMatrix w = assembleCWM(A.grid, B.grid, {A.trajectory, B.trajectory}, 1000);
    const double m = collisionMeasure(solid(A.grid), w, elementToVertex(solid(B.grid)));
    CHECK(m >= 0.2375);
    CHECK(m <= 0.2625);
}

TEST_CASE("oracle examples")
{
    const UniformGrid g = UniformGrid::make2d(0.0, 0.0, 1.0 / 16, 16, 16);
    const UniformGrid far = UniformGrid::make2d(3.0, 0.0, 1.0 / 16, 16, 16);
    CHECK(oracleCollision(solid(g), solid(far), {}, 10, 4) == 0.0);
    CHECK(std::abs(oracleCollision(solid(g), solid(g), {}, 10, 4) - 1.0) <= 0.25);

    const UniformGrid gb = UniformGrid::make2d(2.0, 0.0, 1.0 / 64, 64, 64);
    const UniformGrid ga = UniformGrid::make2d(0.0, 0.0, 1.0 / 64, 64, 64);
    const double o = oracleCollision(solid(ga), solid(gb), {Trajectory::stationary(), slide(-2.0)}, 1000, 4);
    CHECK(std::abs(o - 0.25) <= 0.01);
}

TEST_CASE("CWM invariants: nonnegative integer counts and column sums within one cell measure")
{
    const UniformGrid a = UniformGrid::make2d(0.0, 0.0, 0.125, 12, 10);
    const UniformGrid b = UniformGrid::make2d(0.3, -0.2, 0.125, 9, 9);
    const CollisionWeightMatrix w =
        assembleCWM(a, b, {Trajectory::stationary(), Trajectory::rotation(Point(0.8, 0.4, 0.0), 0.0, kPi)}, 240);
    for (std::size_t v = 0; v < w.cols(); ++v)
        CHECK(w.columnCount(v) <= 240u);
    for (std::uint32_t c : w.counts())
        CHECK(c > 0u);
    CHECK(w.quantum() == doctest::Approx(0.125 * 0.125 / 240));
}

TEST_CASE("void designs measure zero and adding material never decreases the measure")
{
    const UniformGrid a = UniformGrid::make2d(0.0, 0.0, 0.1, 10, 10);
    const UniformGrid b = UniformGrid::make2d(0.5, 0.0, 0.1, 10, 10);
    const CollisionWeightMatrix w =
        assembleCWM(a, b, {Trajectory::stationary(), Trajectory::rotation(Point(1.0, 0.5, 0.0), 0.0, 1.0)}, 200);
    std::mt19937_64 rng(31);
    const ElementField rhoB = randomDesign(b, 0.6, rng);
    CHECK(collisionCount(ElementField::filled(a, 0.0, FieldKind::Binary), w, elementToVertex(rhoB)) == 0);
    ElementField rhoA = randomDesign(a, 0.3, rng);
    std::int64_t last = collisionCount(rhoA, w, elementToVertex(rhoB));
    for (std::size_t e = 0; e < rhoA.size(); ++e) {
        if (rhoA.solid(e))
            continue;
        rhoA.values[e] = 1.0;
        const std::int64_t now = collisionCount(rhoA, w, elementToVertex(rhoB));
        CHECK(now >= last);
        last = now;
    }
}

TEST_CASE("flipping any element changes G by exactly the gradient")
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        std::mt19937_64 rng(seed);
        const UniformGrid a = UniformGrid::make2d(0.0, 0.0, 1.0 / 16, 16, 16);
        const UniformGrid b = UniformGrid::make2d(0.25, 0.1, 1.0 / 16, 16, 16);
        const CollisionWeightMatrix w =
            assembleCWM(a, b, {Trajectory::stationary(), Trajectory::rotation(Point(0.7, 0.6, 0.0), 0.0, 2.0)}, 300);
        const GradientCheck g =
            checkGradientLinearity(w, randomDesign(a, 0.5, rng), elementToVertex(randomDesign(b, 0.5, rng)), 0, rng);
        CHECK(g.flips == a.elementCount());
        CHECK(g.maxDiscrepancy == 0);
    }
}

TEST_CASE("inverting the motion gives nearly the same measure")
{
    const Assembly a = buildAssembly(builtinScenario("translating-squares"));
    const auto& A = a.parts[0];
    const auto& B = a.parts[1];
    const CollisionSet set = CollisionSet::assemble({A.grid, B.grid}, {A.trajectory, B.trajectory}, 1000);
    const CollisionReport r = aggregateCollision({solid(A.grid), solid(B.grid)},
                                                 {elementToVertex(solid(A.grid)), elementToVertex(solid(B.grid))}, set);
    CHECK(std::abs(r.pair(0, 1) - r.pair(1, 0)) / std::max(r.pair(0, 1), r.pair(1, 0)) <= 0.05);
    CHECK(r.aggregate[0] == r.pair(0, 1));
    CHECK(r.pair(0, 0) == 0.0);
}

TEST_CASE("aggregateCollision with one part or a missing pair")
{
    const UniformGrid g = UniformGrid::make2d(0.0, 0.0, 1.0, 2, 2);
    const CollisionSet one = CollisionSet::assemble({g}, {Trajectory::stationary()}, 10);
    const CollisionReport r = aggregateCollision({solid(g)}, {elementToVertex(solid(g))}, one);
    REQUIRE(r.aggregate.size() == 1);
    CHECK(r.aggregate[0] == 0.0);
    CHECK(r.collisionFree());

    CollisionSet missing(2);
    CHECK_THROWS_WITH_AS(missing.get(0, 1), doctest::Contains("missing collision weight matrix"), ConfigError);
}

TEST_CASE("collision gradient vanishes when the other parts are void")
{
    const UniformGrid g = UniformGrid::make2d(0.0, 0.0, 0.25, 4, 4);
    const CollisionSet set = CollisionSet::assemble({g, g}, {Trajectory::stationary(), Trajectory::stationary()}, 10);
    const ElementField grad =
        collisionGradient(set, 0, {elementToVertex(solid(g)), VertexField::filled(g, 0.0, FieldKind::Binary)});
    for (double v : grad.values)
        CHECK(v == 0.0);
}

TEST_CASE("collision sensitivity examples")
{
    const UniformGrid g = UniformGrid::make2d(0.0, 0.0, 1.0, 2, 1);
    const ElementField zero = ElementField::filled(g, 0.0, FieldKind::Scalar);
    CHECK(collisionSensitivity(zero).values == std::vector<double>{1.0, 1.0});
    const ElementField grad = ElementField::fromValues(g, {0.0, 2.5}, FieldKind::Scalar);
    CHECK(collisionSensitivity(grad).values == std::vector<double>{1.0, 0.0});

    const UniformGrid g5 = UniformGrid::make2d(0.0, 0.0, 1.0, 5, 1);
    const ElementField f = ElementField::fromValues(g5, {0.3, 4.0, 1.0, 0.0, 2.0}, FieldKind::Scalar);
    const ElementField tg = collisionSensitivity(f);
    CHECK(std::min_element(tg.values.begin(), tg.values.end()) - tg.values.begin() == 1);
    for (double v : tg.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("tracker matches a full recomputation after arbitrary updates")
{
    std::mt19937_64 rng(41);
    const std::vector<UniformGrid> grids{UniformGrid::make2d(0.0, 0.0, 0.125, 8, 8),
                                         UniformGrid::make2d(0.5, 0.25, 0.125, 8, 6),
                                         UniformGrid::make2d(-0.5, 0.5, 0.125, 6, 8)};
    const std::vector<Trajectory> traj{Trajectory::stationary(), Trajectory::rotation(Point(1, 0.5, 0), 0.0, 1.5),
                                       slide(1.0)};
    const CollisionSet set = CollisionSet::assemble(grids, traj, 64);
    std::vector<ElementField> rho;
    std::vector<VertexField> rhoV;
    for (const auto& g : grids) {
        rho.push_back(randomDesign(g, 0.7, rng));
        rhoV.push_back(elementToVertex(rho.back()));
    }
    CollisionTracker tracker(set, rhoV);
    for (int round = 0; round < 6; ++round) {
        const std::size_t p = static_cast<std::size_t>(round) % grids.size();
        rho[p] = randomDesign(grids[p], 0.5, rng);
        rhoV[p] = elementToVertex(rho[p]);
        tracker.update(p, rhoV[p]);
        const CollisionReport full = aggregateCollision(rho, rhoV, set);
        const CollisionReport inc = tracker.report(rho);
        CHECK(full.pairwiseCounts == inc.pairwiseCounts);
        CHECK(full.pairwise == inc.pairwise);
        for (std::size_t i = 0; i < grids.size(); ++i) {
            CHECK(collisionGradientCounts(set, i, rhoV) == tracker.gradientCounts(i));
            CHECK(full.localFields[i] == inc.localFields[i]);
        }
    }
}

TEST_CASE("reverse pressure marks elements whose vertices other parts see")
{
    const UniformGrid a = UniformGrid::make2d(0.0, 0.0, 1.0, 2, 1);
    const UniformGrid b = UniformGrid::make2d(1.0, 0.0, 1.0, 2, 1);
    const CollisionSet set = CollisionSet::assemble({a, b}, {Trajectory::stationary(), Trajectory::stationary()}, 4);
    const ElementField p = reverseCollisionPressure(set, 1, {solid(a), solid(b)});
    // b's left element shares its left vertices with a's right cell; its right element touches nothing inside a.
    CHECK(p.values[0] > 0.0);
    CHECK(p.values[1] == 0.0);
}

TEST_CASE("CWM binary cache round-trips and rejects garbage")
{
    const UniformGrid a = UniformGrid::make2d(0.0, 0.0, 0.25, 6, 5);
    const UniformGrid b = UniformGrid::make2d(0.1, 0.2, 0.25, 5, 5);
    const CollisionWeightMatrix w =
        assembleCWM(a, b, {Trajectory::stationary(), Trajectory::rotation(Point(0.5, 0.5, 0.0), 0.0, 3.0)}, 50);
    std::stringstream ss;
    writeCWM(ss, w);
    CHECK(readCWM(ss) == w);
    std::stringstream bad("not a matrix");
    CHECK_THROWS(readCWM(bad));
}

TEST_CASE("dimension mismatches are rejected")
{
    const UniformGrid a = UniformGrid::make2d(0.0, 0.0, 1.0, 2, 2);
    const UniformGrid b = UniformGrid::make2d(0.0, 0.0, 1.0, 3, 3);
    const CollisionWeightMatrix w = assembleCWM(a, a, {}, 5);
    CHECK_THROWS_AS(collisionMeasure(solid(b), w, elementToVertex(solid(a))), ConfigError);
    CHECK_THROWS_AS(collisionMeasure(solid(a), w, elementToVertex(solid(b))), ConfigError);
    CHECK_THROWS_AS(assembleCWM(a, a, {}, 0), ConfigError);
}

TEST_CASE("CWM agrees with the oracle for a square turning in place")
{
    const double h = 1.0 / 64;
    const UniformGrid g = UniformGrid::make2d(0.0, 0.0, h, 64, 64);
    for (double sweep : {kPi / 4, kPi / 2, kPi}) {
        const RelativeTrajectory rel{Trajectory::stationary(), Trajectory::rotation(Point(0.5, 0.5, 0.0), 0.0, sweep)};
        const double cwm = collisionMeasure(solid(g), assembleCWM(g, g, rel, 200), elementToVertex(solid(g)));
        const double oracle = oracleCollision(solid(g), solid(g), rel, 200, 4);
        CHECK(std::abs(cwm - oracle) / oracle <= 0.05);
    }
}
