#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "codesign/collision.hpp"
#include "codesign/config.hpp"
#include "codesign/optimizer.hpp"
#include "codesign/scenarios.hpp"
#include "codesign/sensitivity.hpp"
#include "codesign/verify.hpp"

namespace py = pybind11;
using namespace codesign;

namespace {

py::array_t<double> asImage(const ElementField& f)
{
    const auto& g = f.grid;
    py::array_t<double> out({g.cells[1], g.cells[0]});
    auto m = out.mutable_unchecked<2>();
    for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i)
            m(j, i) = f.values[g.elementIndex(i, j)];
    return out;
}

py::dict runConfig(const RunConfig& config)
{
    const OptimizationTrace t = coDesign(buildAssembly(config));
    py::list rows;
    for (const TraceRow& r : t.rows) {
        py::dict d;
        d["iter"] = r.iter;
        d["part"] = r.part;
        d["v"] = r.v;
        d["compliance"] = r.compliance;
        d["ratio"] = r.ratio;
        d["G"] = r.G;
        d["collision_count"] = r.collisionCount;
        d["tau"] = r.tau;
        d["inner_iters"] = r.innerIters;
        rows.append(d);
    }
    py::list designs;
    for (const ElementField& f : t.designs)
        designs.append(asImage(f));
    py::dict out;
    out["converged"] = t.converged;
    out["stop_reason"] = t.stopReason;
    out["outer_iterations"] = t.outerIterations;
    out["rows"] = rows;
    out["designs"] = designs;
    out["cwm_assemblies"] = t.stats.cwmAssemblies;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Collision-aware topology co-design of moving parts";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<FeaError>(m, "FeaError", PyExc_RuntimeError);

    m.def("scenario_names", &scenarioNames);
    m.def(
        "scenario_config", [](const std::string& name, double scale) { return writeConfigText(builtinScenario(name, scale)); },
        py::arg("name"), py::arg("scale") = 1.0, "Built-in scenario as JSON config text.");
    m.def(
        "run", [](const std::string& configText) { return runConfig(parseConfigText(configText)); },
        py::arg("config"), "Run the co-design loop on JSON config text.");
    m.def(
        "run_scenario",
        [](const std::string& name, double scale) { return runConfig(builtinScenario(name, scale)); },
        py::arg("name"), py::arg("scale") = 1.0);
    m.def(
        "initial_collision",
        [](const std::string& configText) {
            const Assembly a = buildAssembly(parseConfigText(configText));
            std::vector<UniformGrid> grids;
            std::vector<Trajectory> traj;
            std::vector<ElementField> rho;
            std::vector<VertexField> rhoV;
            for (const Part& p : a.parts) {
                grids.push_back(p.grid);
                traj.push_back(p.trajectory);
                rho.push_back(p.designMask);
                rhoV.push_back(elementToVertex(p.designMask));
            }
            const CollisionReport r =
                aggregateCollision(rho, rhoV, CollisionSet::assemble(grids, traj, a.settings.steps));
            py::array_t<double> pair({r.parts, r.parts});
            auto w = pair.mutable_unchecked<2>();
            for (std::size_t i = 0; i < r.parts; ++i)
                for (std::size_t j = 0; j < r.parts; ++j)
                    w(i, j) = r.pair(i, j);
            return pair;
        },
        py::arg("config"), "Pairwise collision measures g_ij of the all-solid designs.");
    m.def(
        "uniaxial_tsf",
        [](double youngs, double poisson) {
            CentroidState s;
            s.stress(0, 0) = 1.0;
            s.strain(0, 0) = 1.0 / youngs;
            s.strain(1, 1) = -poisson / youngs;
            return complianceTSFValue(s, poisson);
        },
        py::arg("youngs") = 1.0, py::arg("poisson") = 0.3);
    m.def("spearman", &spearman);
}
