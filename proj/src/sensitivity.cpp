#include "codesign/sensitivity.hpp"

#include <algorithm>
#include <limits>

namespace codesign {

double complianceTSFValue(const CentroidState& s, double nu)
{
    const double contraction = (s.stress.array() * s.strain.array()).sum();
    const double traces = s.stress.trace() * s.strain.trace();
    return 4.0 / (1.0 + nu) * contraction - (1.0 - 3.0 * nu) / (1.0 - nu * nu) * traces;
}

ElementField complianceTSF(const FeaSolution& sol, const Material& mat, const ElementField& rho)
{
    if (rho.grid != sol.grid || sol.centroid.size() != rho.size())
        throw ConfigError("complianceTSF: design and solution disagree on the grid");
    ElementField out = ElementField::filled(rho.grid, 0.0, FieldKind::Scalar);
    for (std::size_t e = 0; e < out.size(); ++e)
        if (rho.solid(e))
            out.values[e] = complianceTSFValue(sol.centroid[e], mat.poisson);
    return out;
}

ElementField normalize(const ElementField& f, const ElementField& mask)
{
    if (f.grid != mask.grid)
        throw ConfigError("normalize: field and mask live on different grids");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < f.size(); ++e)
        if (mask.solid(e)) {
            lo = std::min(lo, f.values[e]);
            hi = std::max(hi, f.values[e]);
        }
    ElementField out = ElementField::filled(f.grid, 0.0, FieldKind::Scalar);
    const bool constant = !(hi > lo);
    for (std::size_t e = 0; e < f.size(); ++e)
        if (mask.solid(e))
            out.values[e] = constant ? 1.0 : (f.values[e] - lo) / (hi - lo);
    return out;
}

ElementField augment(const ElementField& tsfNorm, const ElementField& tg, double lambdaG)
{
    if (tsfNorm.grid != tg.grid)
        throw ConfigError("augment: fields live on different grids");
    if (!(lambdaG >= 0.0))
        throw ConfigError("augment: lambda_g must be nonnegative");
    ElementField out = ElementField::filled(tsfNorm.grid, 0.0, FieldKind::Scalar);
    for (std::size_t e = 0; e < out.size(); ++e)
        out.values[e] = tsfNorm.values[e] + lambdaG * tg.values[e];
    return out;
}

SensitivityBundle makeSensitivity(const FeaSolution* sol, const Material& mat, const ElementField& rho,
                                  const ElementField& tg, double lambdaG, bool withCompliance)
{
    SensitivityBundle b;
    b.lambdaG = lambdaG;
    b.collisionTG = tg;
    if (withCompliance) {
        if (sol == nullptr)
            throw ConfigError("makeSensitivity: compliance requested without a solution");
        b.complianceTSF = complianceTSF(*sol, mat, rho);
        b.complianceTSFNorm = normalize(b.complianceTSF, rho);
    } else {
        b.complianceTSF = ElementField::filled(rho.grid, 0.0, FieldKind::Scalar);
        b.complianceTSFNorm = b.complianceTSF;
    }
    b.augmented = augment(b.complianceTSFNorm, tg, lambdaG);
    return b;
}

} // namespace codesign
