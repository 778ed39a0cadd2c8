#include "codesign/collision_oracle.hpp"

#include <cmath>

#include "codesign/parallel.hpp"

namespace codesign {

double oracleCollision(const ElementField& stationary, const ElementField& moving, const RelativeTrajectory& rel,
                       int steps, int samplesPerCell)
{
    if (steps < 1 || samplesPerCell < 1)
        throw ConfigError("oracleCollision: steps and samplesPerCell must be positive");
    const UniformGrid& sg = stationary.grid;
    const UniformGrid& mg = moving.grid;
    if (sg.dim != mg.dim)
        throw ConfigError("oracleCollision: grids differ in dimension");

    std::vector<Point> offsets;
    const int nz = sg.dim == 3 ? samplesPerCell : 1;
    for (int c = 0; c < nz; ++c)
        for (int b = 0; b < samplesPerCell; ++b)
            for (int a = 0; a < samplesPerCell; ++a) {
                Point o = Point::Zero();
                o.x() = (a + 0.5) / samplesPerCell * sg.spacing;
                o.y() = (b + 0.5) / samplesPerCell * sg.spacing;
                if (sg.dim == 3)
                    o.z() = (c + 0.5) / samplesPerCell * sg.spacing;
                offsets.push_back(o);
            }

    std::vector<Point> lowerCorners;
    for (std::size_t e = 0; e < sg.elementCount(); ++e) {
        if (!stationary.solid(e))
            continue;
        Point lo = sg.elementCenter(e);
        for (int a = 0; a < sg.dim; ++a)
            lo[a] -= 0.5 * sg.spacing;
        lowerCorners.push_back(lo);
    }

    const double dt = 1.0 / steps;
    long long hits = 0;
#ifdef _OPENMP
#pragma omp parallel for reduction(+ : hits) num_threads(threadCount()) schedule(static)
#endif
    for (int k = 0; k < steps; ++k) {
        // Membership in the moved solid is membership of the pulled-back point.
        const RigidTransform back = rel.at(k * dt).inverse();
        for (const Point& corner : lowerCorners)
            for (const Point& o : offsets)
                if (auto cell = locateCell(mg, back.apply(corner + o)); cell && moving.solid(*cell))
                    ++hits;
    }
    const double sampleMeasure = sg.cellMeasure() / static_cast<double>(offsets.size());
    return static_cast<double>(hits) * sampleMeasure * dt;
}

} // namespace codesign
