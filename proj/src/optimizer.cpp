#include "codesign/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

namespace codesign {

namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double perPart(const std::vector<double>& v, std::size_t part)
{
    return v.size() == 1 ? v.front() : v.at(part);
}

} // namespace

std::string toString(TerminationMode mode)
{
    return mode == TerminationMode::CollisionFree ? "collision-free" : "volume-target";
}

TerminationMode terminationModeFromString(const std::string& s)
{
    if (s == "collision-free")
        return TerminationMode::CollisionFree;
    if (s == "volume-target")
        return TerminationMode::VolumeTarget;
    throw ConfigError("unknown termination mode '" + s + "' (expected collision-free or volume-target)");
}

void OptimizerSettings::validate(std::size_t parts) const
{
    auto checkList = [parts](const std::vector<double>& v, const char* name) {
        if (v.size() != 1 && v.size() != parts)
            throw ConfigError(std::string(name) + ": expected 1 or " + std::to_string(parts) + " values, got " +
                              std::to_string(v.size()));
    };
    checkList(volumeTarget, "volume_target");
    checkList(gamma, "gamma");
    checkList(lambdaG, "lambda_g");
    for (double v : volumeTarget)
        if (!(v > 0.0 && v <= 1.0))
            throw ConfigError("volume_target: each value must lie in (0, 1]");
    for (double g : gamma)
        if (!(g >= 0.0 && g <= 1.0))
            throw ConfigError("gamma: each value must lie in [0, 1]");
    for (double l : lambdaG)
        if (!(l >= 0.0) || !std::isfinite(l))
            throw ConfigError("lambda_g: each value must be nonnegative");
    if (!(maxVolumeStep > 0.0 && maxVolumeStep <= 0.1))
        throw ConfigError("max_volume_step: must lie in (0, 0.1]");
    if (!(tolerance > 0.0))
        throw ConfigError("tolerance: must be positive");
    if (maxInner < 1)
        throw ConfigError("max_inner: must be at least 1");
    if (maxOuter < 1)
        throw ConfigError("max_outer: must be at least 1");
    if (steps < 1)
        throw ConfigError("collision steps: K must be at least 1");
    if (!(ratioCap > 1.0))
        throw ConfigError("ratio_cap: must exceed 1");
}

double OptimizerSettings::volumeTargetOf(std::size_t part) const
{
    return perPart(volumeTarget, part);
}

double OptimizerSettings::gammaOf(std::size_t part) const
{
    return perPart(gamma, part);
}

double OptimizerSettings::lambdaGOf(std::size_t part) const
{
    return perPart(lambdaG, part);
}

std::size_t targetElementCount(double fraction, std::size_t maskCount)
{
    return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(maskCount) + 1e-9));
}

ThresholdResult findThreshold(const ElementField& sens, const ElementField& rho, const ElementField& frozen,
                              const ElementField& mask, double targetFraction)
{
    if (sens.grid != rho.grid || frozen.grid != rho.grid || mask.grid != rho.grid)
        throw ConfigError("findThreshold: fields live on different grids");
    if (!(targetFraction > 0.0 && targetFraction <= 1.0))
        throw ConfigError("findThreshold: target fraction must lie in (0, 1]");

    const std::size_t maskCount = mask.countSolid();
    const std::size_t keep = targetElementCount(targetFraction, maskCount);
    std::vector<std::size_t> candidates;
    std::size_t frozenSolid = 0;
    for (std::size_t e = 0; e < rho.size(); ++e) {
        if (!rho.solid(e) || !mask.solid(e))
            continue;
        if (frozen.solid(e))
            ++frozenSolid;
        else
            candidates.push_back(e);
    }
    if (keep < frozenSolid)
        throw ConfigError("target conflicts with frozen material: target keeps " + std::to_string(keep) +
                          " elements but " + std::to_string(frozenSolid) + " are frozen");

    std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
        if (sens.values[a] != sens.values[b])
            return sens.values[a] < sens.values[b];
        return a < b;
    });

    const std::size_t current = frozenSolid + candidates.size();
    const std::size_t remove = current > keep ? current - keep : 0;

    ThresholdResult r;
    r.design = ElementField::filled(rho.grid, 0.0, FieldKind::Binary);
    for (std::size_t e = 0; e < rho.size(); ++e)
        if (rho.solid(e) && mask.solid(e) && frozen.solid(e))
            r.design.values[e] = 1.0;
    for (std::size_t k = remove; k < candidates.size(); ++k)
        r.design.values[candidates[k]] = 1.0;
    r.kept = current - remove;
    if (remove > 0)
        r.tau = sens.values[candidates[remove - 1]];
    else if (!candidates.empty())
        r.tau = std::nextafter(sens.values[candidates.front()], -std::numeric_limits<double>::infinity());
    else
        r.tau = -std::numeric_limits<double>::infinity();
    return r;
}

ThresholdResult findThreshold(const ElementField& sens, const ElementField& frozen, double targetFraction)
{
    const ElementField all = ElementField::filled(sens.grid, 1.0, FieldKind::Binary);
    return findThreshold(sens, all, frozen, all, targetFraction);
}

InnerResult innerLoop(LinearElasticSystem* system, const Part& part, const ElementField& outer,
                      const FeaSolution* outerSolution, const ElementField& frozen, const ElementField& tg,
                      double lambdaG, double targetFraction, const OptimizerSettings& settings)
{
    const bool withCompliance = settings.compliance && system != nullptr;
    if (withCompliance && outerSolution == nullptr)
        throw ConfigError("innerLoop: compliance mode needs the solution of the outer design");

    InnerResult r;
    r.design = outer;
    if (withCompliance) {
        r.solution = *outerSolution;
        r.compliance = outerSolution->compliance;
    } else {
        r.compliance = kNaN;
    }

    for (int it = 1; it <= settings.maxInner; ++it) {
        auto t0 = Clock::now();
        SensitivityBundle bundle = makeSensitivity(withCompliance ? &r.solution : nullptr, part.material, outer, tg,
                                                   lambdaG, withCompliance);
        ThresholdResult th = findThreshold(bundle.augmented, outer, frozen, part.designMask, targetFraction);
        r.sensitivitySeconds += secondsSince(t0);
        r.iterations = it;
        r.tau = th.tau;
        r.sensitivity = std::move(bundle);
        if (th.design.values == r.design.values)
            break;
        if (!withCompliance) {
            r.design = std::move(th.design);
            break;
        }

        t0 = Clock::now();
        FeaSolution next;
        try {
            next = system->solve(th.design);
        } catch (const FeaError& e) {
            r.feaSeconds += secondsSince(t0);
            r.singular = true;
            r.failure = e.what();
            return r;
        }
        r.feaSeconds += secondsSince(t0);
        ++r.solves;

        const double delta = std::abs(next.compliance - r.compliance) / std::max(r.compliance, 1e-300);
        r.design = std::move(th.design);
        r.solution = std::move(next);
        r.compliance = r.solution.compliance;
        if (delta <= settings.tolerance)
            break;
    }
    return r;
}

std::vector<TraceRow> OptimizationTrace::finalRows() const
{
    const std::size_t n = designs.size();
    if (rows.size() < n)
        return rows;
    return {rows.end() - static_cast<std::ptrdiff_t>(n), rows.end()};
}

namespace {

bool anySolidPositive(const ElementField& f, const ElementField& rho)
{
    for (std::size_t e = 0; e < f.size(); ++e)
        if (rho.solid(e) && f.values[e] > 0.0)
            return true;
    return false;
}

CollisionReport emptyReport(const std::vector<ElementField>& designs)
{
    CollisionReport r;
    r.parts = designs.size();
    r.pairwise.assign(r.parts * r.parts, 0.0);
    r.pairwiseCounts.assign(r.parts * r.parts, 0);
    r.aggregate.assign(r.parts, 0.0);
    r.aggregateCounts.assign(r.parts, 0);
    for (const ElementField& d : designs)
        r.localFields.push_back(ElementField::filled(d.grid, 0.0, FieldKind::Scalar));
    return r;
}

} // namespace

OptimizationTrace coDesign(const Assembly& assembly, const CheckpointFn& checkpoint)
{
    std::vector<UniformGrid> grids;
    std::vector<Trajectory> trajectories;
    for (const Part& p : assembly.parts) {
        grids.push_back(p.grid);
        trajectories.push_back(p.trajectory);
    }
    const std::uint64_t before = cwmAssemblyCount();
    const auto t0 = Clock::now();
    CollisionSet cwms = grids.size() >= 2 ? CollisionSet::assemble(grids, trajectories, assembly.settings.steps)
                                          : CollisionSet(grids.size());
    const double cwmSeconds = secondsSince(t0);
    OptimizationTrace trace = coDesign(assembly, cwms, checkpoint);
    trace.stats.cwmSeconds = cwmSeconds;
    trace.stats.cwmAssemblies = cwmAssemblyCount() - before;
    return trace;
}

OptimizationTrace coDesign(const Assembly& assembly, const CollisionSet& cwms, const CheckpointFn& checkpoint)
{
    const std::vector<Part>& parts = assembly.parts;
    const OptimizerSettings& settings = assembly.settings;
    const std::size_t n = parts.size();
    if (n == 0)
        throw ConfigError("coDesign: assembly has no parts");
    settings.validate(n);
    if (cwms.parts() != n)
        throw ConfigError("coDesign: collision set does not match the part count");

    const std::uint64_t assembliesAtStart = cwmAssemblyCount();
    OptimizationTrace trace;
    trace.stats.feaSeconds.push_back(0.0);
    trace.stats.collisionSeconds.push_back(0.0);
    trace.stats.sensitivitySeconds.push_back(0.0);

    std::vector<ElementField> rho(n);
    std::vector<ElementField> frozen(n);
    std::vector<std::unique_ptr<LinearElasticSystem>> systems(n);
    std::vector<FeaSolution> solutions(n);
    std::vector<double> target(n);
    std::vector<std::size_t> maskCount(n);
    std::vector<bool> suspended(n, false);
    std::vector<SensitivityBundle> bundles(n);

    for (std::size_t i = 0; i < n; ++i) {
        const Part& p = parts[i];
        p.grid.validate();
        p.designMask.validate();
        p.initial.validate();
        if (p.designMask.grid != p.grid || p.initial.grid != p.grid)
            throw ConfigError("part '" + p.name + "': design fields live on a different grid");
        rho[i] = ElementField::filled(p.grid, 0.0, FieldKind::Binary);
        for (std::size_t e = 0; e < rho[i].size(); ++e)
            rho[i].values[e] = p.designMask.solid(e) && p.initial.solid(e) ? 1.0 : 0.0;
        maskCount[i] = p.designMask.countSolid();
        if (maskCount[i] == 0)
            throw ConfigError("part '" + p.name + "': degenerate design domain (empty design mask)");
        frozen[i] = ElementField::filled(p.grid, 0.0, FieldKind::Binary);
        if (settings.compliance) {
            const ElementField f = frozenElements(p.grid, p.bc, p.designMask);
            for (std::size_t e = 0; e < f.size(); ++e)
                frozen[i].values[e] = f.solid(e) && rho[i].solid(e) ? 1.0 : 0.0;
            const auto ts = Clock::now();
            systems[i] = std::make_unique<LinearElasticSystem>(p.grid, p.material, p.bc, p.designMask);
            solutions[i] = systems[i]->solve(rho[i]);
            trace.stats.feaSeconds[0] += secondsSince(ts);
            ++trace.stats.feaSolves;
            trace.initialCompliance.push_back(solutions[i].compliance);
        } else {
            trace.initialCompliance.push_back(kNaN);
        }
        target[i] = volumeFraction(rho[i], p.designMask);
    }

    auto tc = Clock::now();
    std::vector<VertexField> rhoV;
    for (const ElementField& r : rho)
        rhoV.push_back(elementToVertex(r));
    std::unique_ptr<CollisionTracker> tracker;
    if (n >= 2)
        tracker = std::make_unique<CollisionTracker>(cwms, rhoV);
    auto makeReport = [&]() { return tracker ? tracker->report(rho) : emptyReport(rho); };
    CollisionReport report = makeReport();
    trace.stats.collisionSeconds[0] += secondsSince(tc);

    std::vector<double> tau(n, kNaN);
    std::vector<int> innerIters(n, 0);
    auto logRows = [&](int iter) {
        for (std::size_t i = 0; i < n; ++i) {
            TraceRow row;
            row.iter = iter;
            row.part = i;
            row.v = volumeFraction(rho[i], parts[i].designMask);
            row.compliance = settings.compliance ? solutions[i].compliance : kNaN;
            row.ratio = settings.compliance ? solutions[i].compliance / trace.initialCompliance[i] : kNaN;
            row.G = report.aggregate[i];
            row.collisionCount = report.aggregateCounts[i];
            row.tau = tau[i];
            row.innerIters = innerIters[i];
            trace.rows.push_back(row);
        }
    };
    logRows(0);
    if (checkpoint)
        checkpoint(IterationSnapshot{0, rho, bundles, report});

    auto volumeReached = [&](std::size_t i) {
        return rho[i].countSolid() <= targetElementCount(settings.volumeTargetOf(i), maskCount[i]);
    };
    auto active = [&](std::size_t i) { return !suspended[i] && settings.gammaOf(i) > 0.0 && !volumeReached(i); };

    int iter = 0;
    for (;;) {
        const bool free = report.collisionFree();
        bool allReached = true;
        bool anyActive = false;
        for (std::size_t i = 0; i < n; ++i) {
            allReached = allReached && volumeReached(i);
            anyActive = anyActive || active(i);
        }
        if (free && (settings.mode == TerminationMode::CollisionFree || allReached)) {
            trace.converged = true;
            trace.stopReason = settings.mode == TerminationMode::CollisionFree ? "collision-free"
                                                                               : "collision-free at volume targets";
            break;
        }
        if (!anyActive) {
            trace.converged = free;
            trace.stopReason = free ? "collision-free; remaining parts cannot shrink further"
                                    : "collisions remain but no part can shrink further";
            break;
        }
        if (iter >= settings.maxOuter) {
            trace.converged = false;
            trace.stopReason = "outer iteration cap reached";
            break;
        }
        ++iter;
        trace.stats.feaSeconds.push_back(0.0);
        trace.stats.collisionSeconds.push_back(0.0);
        trace.stats.sensitivitySeconds.push_back(0.0);
        double& feaTime = trace.stats.feaSeconds.back();
        double& collisionTime = trace.stats.collisionSeconds.back();
        double& sensitivityTime = trace.stats.sensitivitySeconds.back();

        for (std::size_t i = 0; i < n; ++i) {
            tau[i] = kNaN;
            innerIters[i] = 0;
            if (!active(i))
                continue;
            const Part& p = parts[i];
            const double floorFraction = std::max(settings.volumeTargetOf(i), 0.0);
            target[i] = std::max(target[i] - settings.gammaOf(i) * settings.maxVolumeStep, floorFraction);
            const std::size_t frozenCount = frozen[i].countSolid();
            if (targetElementCount(target[i], maskCount[i]) < frozenCount)
                target[i] = (static_cast<double>(frozenCount) + 0.5) / static_cast<double>(maskCount[i]);
            if (targetElementCount(target[i], maskCount[i]) >= rho[i].countSolid()) {
                if (frozenCount >= rho[i].countSolid())
                    suspended[i] = true;
                continue;
            }

            tc = Clock::now();
            ElementField tg = ElementField::filled(p.grid, 1.0, FieldKind::Scalar);
            if (tracker) {
                ElementField grad = tracker->gradient(i);
                if (!anySolidPositive(grad, rho[i]))
                    grad = reverseCollisionPressure(cwms, i, rho);
                tg = collisionSensitivity(grad, &rho[i]);
            }
            collisionTime += secondsSince(tc);

            InnerResult inner = innerLoop(systems[i].get(), p, rho[i], settings.compliance ? &solutions[i] : nullptr,
                                          frozen[i], tg, settings.lambdaGOf(i), target[i], settings);
            feaTime += inner.feaSeconds;
            sensitivityTime += inner.sensitivitySeconds;
            trace.stats.feaSolves += inner.solves;
            innerIters[i] = inner.iterations;
            tau[i] = inner.tau;
            bundles[i] = std::move(inner.sensitivity);

            if (inner.singular)
                suspended[i] = true;
            else if (settings.compliance && inner.compliance / trace.initialCompliance[i] > settings.ratioCap)
                suspended[i] = true;
            if (suspended[i])
                continue;

            rho[i] = std::move(inner.design);
            if (settings.compliance)
                solutions[i] = std::move(inner.solution);
            tc = Clock::now();
            if (tracker)
                tracker->update(i, elementToVertex(rho[i]));
            collisionTime += secondsSince(tc);
        }

        tc = Clock::now();
        report = makeReport();
        collisionTime += secondsSince(tc);
        logRows(iter);
        if (checkpoint)
            checkpoint(IterationSnapshot{iter, rho, bundles, report});
    }

    trace.outerIterations = iter;
    trace.designs = rho;
    trace.suspended = suspended;
    trace.finalReport = report;
    trace.stats.cwmAssemblies = cwmAssemblyCount() - assembliesAtStart;
    return trace;
}

} // namespace codesign
