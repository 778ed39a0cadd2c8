#pragma once

#include "codesign/fea.hpp"
#include "codesign/grid.hpp"

namespace codesign {

struct SensitivityBundle {
    ElementField complianceTSF;
    ElementField complianceTSFNorm;
    ElementField collisionTG;
    ElementField augmented;
    double lambdaG = 0.0;
};

/// Plane-stress topological derivative of compliance from one centroid state.
double complianceTSFValue(const CentroidState& s, double poisson);

/// Per-element TSF of a solved design; elements with rho = 0 get 0.
ElementField complianceTSF(const FeaSolution& sol, const Material& mat, const ElementField& rho);

/// (f - min) / (max - min) over mask elements; elements outside the mask map to 0.
/// A constant field (or an empty mask) maps to all ones on the mask.
ElementField normalize(const ElementField& f, const ElementField& mask);

/// tsfNorm + lambdaG * tg.
ElementField augment(const ElementField& tsfNorm, const ElementField& tg, double lambdaG);

/// Builds the bundle; with `withCompliance` false the compliance terms are zero and
/// augmented = lambdaG * tg.
SensitivityBundle makeSensitivity(const FeaSolution* sol, const Material& mat, const ElementField& rho,
                                  const ElementField& tg, double lambdaG, bool withCompliance = true);

} // namespace codesign
