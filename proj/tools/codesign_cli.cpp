#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "codesign/collision.hpp"
#include "codesign/config.hpp"
#include "codesign/optimizer.hpp"
#include "codesign/output.hpp"
#include "codesign/scenarios.hpp"
#include "codesign/verify.hpp"

namespace {

using namespace codesign;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitVerification = 4;

struct Options {
    std::string configPath;
    std::string scenario;
    double scale = 1.0;
    std::string out;
    std::string mode;
    std::vector<double> lambdaG;
    std::vector<double> gamma;
    std::uint64_t seed = 1;
    bool collisionOnly = false;
    int steps = 0;
    int maxOuter = 0;
    int samples = 4;
    double tolerance = 0.05;
    std::size_t flips = 200;
};

void addCommon(CLI::App* cmd, Options& o)
{
    auto* cfg = cmd->add_option("--config", o.configPath, "JSON run configuration")->check(CLI::ExistingFile);
    auto* scn = cmd->add_option("--scenario", o.scenario,
                                "Built-in scenario: cam-follower, three-squares, gripper-cams, translating-squares");
    cfg->excludes(scn);
    cmd->add_option("--scale", o.scale, "Resolution multiplier for built-in scenarios")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "Output directory (defaults to the config's outputs.directory)");
    cmd->add_option("--mode", o.mode, "Termination mode")->check(CLI::IsMember({"collision-free", "volume-target"}));
    cmd->add_option("--lambda-g", o.lambdaG, "Collision weight per part (one value broadcasts)");
    cmd->add_option("--gamma", o.gamma, "Decrement aggressiveness per part (one value broadcasts)");
    cmd->add_option("--seed", o.seed, "Seed for randomized checks");
    cmd->add_flag("--collision-only", o.collisionOnly, "Drop the compliance term (pure collision sensitivity)");
    cmd->add_option("--steps", o.steps, "Override the collision time steps K");
    cmd->add_option("--max-outer", o.maxOuter, "Override the outer iteration cap");
}

RunConfig loadConfig(const Options& o)
{
    if (o.configPath.empty() == o.scenario.empty())
        throw ConfigError("exactly one of --config or --scenario is required");
    RunConfig c = o.configPath.empty() ? builtinScenario(o.scenario, o.scale) : parseConfig(o.configPath);
    if (!o.mode.empty())
        c.optimizer.mode = terminationModeFromString(o.mode);
    if (!o.lambdaG.empty())
        c.optimizer.lambdaG = o.lambdaG;
    if (!o.gamma.empty())
        c.optimizer.gamma = o.gamma;
    if (o.collisionOnly)
        c.optimizer.compliance = false;
    if (o.steps > 0)
        c.optimizer.steps = o.steps;
    if (o.maxOuter > 0)
        c.optimizer.maxOuter = o.maxOuter;
    if (!o.out.empty())
        c.outputs.directory = o.out;
    validateConfig(c);
    return c;
}

int runVerb(const Options& o)
{
    const RunConfig config = loadConfig(o);
    const Assembly assembly = buildAssembly(config);
    const std::string dir = config.outputs.directory;
    std::filesystem::create_directories(dir);
    writeConfig((std::filesystem::path(dir) / "config.json").string(), config);

    const OptimizationTrace trace = coDesign(assembly, makeCheckpointWriter(dir, assembly, config.outputs));
    writeRunOutputs(dir, assembly, trace, config.outputs);

    std::printf("%s after %d outer iterations (%s)\n", trace.converged ? "converged" : "NOT converged",
                trace.outerIterations, trace.stopReason.c_str());
    for (const TraceRow& r : trace.finalRows())
        std::printf("  %-10s v = %.4f  f/f0 = %.4f  G = %.6g\n", assembly.parts[r.part].name.c_str(), r.v, r.ratio,
                    r.G);
    std::printf("outputs written to %s\n", dir.c_str());
    return trace.converged ? kExitOk : kExitNotConverged;
}

int checkOracleVerb(const Options& o)
{
    const RunConfig config = loadConfig(o);
    const Assembly assembly = buildAssembly(config);
    bool ok = true;
    for (const OracleComparison& c : compareWithOracle(assembly, o.samples)) {
        const bool pass = c.relativeError <= o.tolerance;
        ok = ok && pass;
        std::printf("pair (%zu, %zu): cwm = %.6g  oracle = %.6g  relative error = %.4f  %s\n", c.stationary,
                    c.moving, c.measure, c.oracle, c.relativeError, pass ? "ok" : "FAIL");
    }
    return ok ? kExitOk : kExitVerification;
}

int checkGradientsVerb(const Options& o)
{
    const RunConfig config = loadConfig(o);
    const Assembly assembly = buildAssembly(config);
    std::mt19937_64 rng(o.seed);
    std::int64_t worst = 0;
    for (std::size_t i = 0; i < assembly.parts.size(); ++i)
        for (std::size_t j = 0; j < assembly.parts.size(); ++j) {
            if (i == j)
                continue;
            const Part& a = assembly.parts[i];
            const Part& b = assembly.parts[j];
            const CollisionWeightMatrix w =
                assembleCWM(a.grid, b.grid, RelativeTrajectory{a.trajectory, b.trajectory}, config.optimizer.steps);
            const ElementField rhoE = randomDesign(a.grid, 0.5, rng);
            const VertexField rhoV = elementToVertex(randomDesign(b.grid, 0.5, rng));
            const GradientCheck g = checkGradientLinearity(w, rhoE, rhoV, o.flips, rng);
            worst = std::max(worst, g.maxDiscrepancy);
            std::printf("pair (%zu, %zu): %zu flips, max abs flip-discrepancy = %lld\n", i, j, g.flips,
                        static_cast<long long>(g.maxDiscrepancy));
        }
    const RankingCheck rank = tsfRankingCheck(10, 10);
    std::printf("TSF ranking on a 10x10 cantilever: Spearman = %.4f over %zu interior elements\n", rank.spearman,
                rank.elements);
    const bool ok = worst == 0 && rank.spearman >= 0.8;
    std::printf("%s\n", ok ? "all checks passed" : "CHECK FAILED");
    return ok ? kExitOk : kExitVerification;
}

int exportFieldsVerb(const Options& o)
{
    const RunConfig config = loadConfig(o);
    const Assembly assembly = buildAssembly(config);
    const auto files = exportFields(config.outputs.directory, assembly);
    std::printf("wrote %zu files to %s\n", files.size(), config.outputs.directory.c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Collision-aware topology co-design of moving parts"};
    app.require_subcommand(1);
    Options o;

    auto* run = app.add_subcommand("run", "Run the co-design loop and write the trace and checkpoints");
    addCommon(run, o);
    auto* oracle = app.add_subcommand("check-oracle", "Compare collision measures against the supersampling oracle");
    addCommon(oracle, o);
    oracle->add_option("--samples", o.samples, "Oracle samples per cell and axis")->check(CLI::PositiveNumber);
    oracle->add_option("--tolerance", o.tolerance, "Relative error tolerance");
    auto* grads = app.add_subcommand("check-gradients", "Exact collision-gradient and TSF ranking checks");
    addCommon(grads, o);
    grads->add_option("--flips", o.flips, "Element flips per pair (0 flips every element)");
    auto* fields = app.add_subcommand("export-fields", "Write density, sensitivity and collision fields");
    addCommon(fields, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed())
            return runVerb(o);
        if (oracle->parsed())
            return checkOracleVerb(o);
        if (grads->parsed())
            return checkGradientsVerb(o);
        return exportFieldsVerb(o);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const FeaError& e) {
        std::fprintf(stderr, "analysis error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
