#include "codesign/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>

#include "codesign/field_io.hpp"
#include "codesign/plot.hpp"
#include "codesign/sensitivity.hpp"

namespace codesign {

namespace fs = std::filesystem;

namespace {

std::string iterDir(int iter)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "iter_%04d", iter);
    return buf;
}

void writeField(const fs::path& dir, const std::string& stem, const ElementField& f, bool images)
{
    writeFieldText((dir / (stem + ".txt")).string(), f.grid, f.values);
    if (images && f.grid.dim == 2)
        writePgm((dir / (stem + ".pgm")).string(), f.grid, f.values);
}

std::string partLabel(const Assembly& a, std::size_t i)
{
    return a.parts[i].name.empty() ? "part" + std::to_string(i) : a.parts[i].name;
}

} // namespace

void writeTraceCsv(std::ostream& out, const OptimizationTrace& trace)
{
    out << "iter,part,v,compliance,ratio,G,tau,inner_iters\n";
    out << std::setprecision(17);
    for (const TraceRow& r : trace.rows)
        out << r.iter << ',' << r.part << ',' << r.v << ',' << r.compliance << ',' << r.ratio << ',' << r.G << ','
            << r.tau << ',' << r.innerIters << '\n';
}

void writeTraceCsv(const std::string& path, const OptimizationTrace& trace)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write trace '" + path + "'");
    writeTraceCsv(out, trace);
}

CheckpointFn makeCheckpointWriter(const std::string& directory, const Assembly& assembly, const OutputConfig& outputs)
{
    if (!outputs.checkpoints)
        return {};
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < assembly.parts.size(); ++i)
        labels.push_back(partLabel(assembly, i));
    return [directory, labels, outputs](const IterationSnapshot& s) {
        const fs::path dir = fs::path(directory) / "checkpoints" / iterDir(s.iteration);
        fs::create_directories(dir);
        for (std::size_t i = 0; i < s.designs.size(); ++i) {
            writeField(dir, labels[i] + "_density", s.designs[i], outputs.images);
            if (outputs.fields && i < s.sensitivities.size() && !s.sensitivities[i].augmented.values.empty()) {
                writeField(dir, labels[i] + "_augmented", s.sensitivities[i].augmented, outputs.images);
                writeField(dir, labels[i] + "_collision_tg", s.sensitivities[i].collisionTG, outputs.images);
            }
            if (outputs.fields && i < s.report.localFields.size())
                writeField(dir, labels[i] + "_collision", s.report.localFields[i], outputs.images);
        }
    };
}

void writeRunOutputs(const std::string& directory, const Assembly& assembly, const OptimizationTrace& trace,
                     const OutputConfig& outputs)
{
    const fs::path dir(directory);
    fs::create_directories(dir);
    writeTraceCsv((dir / "trace.csv").string(), trace);
    for (std::size_t i = 0; i < trace.designs.size(); ++i)
        writeField(dir, partLabel(assembly, i) + "_final", trace.designs[i], outputs.images);

    if (outputs.plots) {
        const std::size_t n = trace.designs.size();
        std::vector<Series> volume(n);
        std::vector<Series> ratio(n);
        std::vector<Series> collision(n);
        for (std::size_t i = 0; i < n; ++i)
            volume[i].label = ratio[i].label = collision[i].label = partLabel(assembly, i);
        for (const TraceRow& r : trace.rows) {
            volume[r.part].x.push_back(r.iter);
            volume[r.part].y.push_back(r.v);
            ratio[r.part].x.push_back(r.iter);
            ratio[r.part].y.push_back(r.ratio);
            collision[r.part].x.push_back(r.iter);
            collision[r.part].y.push_back(r.G);
        }
        writeSvgLineChart((dir / "volume.svg").string(), "Volume fraction", "outer iteration", "v", volume);
        writeSvgLineChart((dir / "compliance_ratio.svg").string(), "Compliance ratio", "outer iteration", "f / f0",
                          ratio);
        writeSvgLineChart((dir / "collision.svg").string(), "Collision measure", "outer iteration", "G", collision);
    }

    std::ofstream summary(dir / "summary.txt");
    summary << std::setprecision(6);
    summary << "converged: " << (trace.converged ? "yes" : "no") << "\n";
    summary << "stop reason: " << trace.stopReason << "\n";
    summary << "outer iterations: " << trace.outerIterations << "\n";
    summary << "cwm assemblies: " << trace.stats.cwmAssemblies << " (" << trace.stats.cwmSeconds << " s)\n";
    summary << "fea solves: " << trace.stats.feaSolves << "\n";
    for (const TraceRow& r : trace.finalRows())
        summary << partLabel(assembly, r.part) << ": v = " << r.v << ", f/f0 = " << r.ratio << ", G = " << r.G
                << (trace.suspended.at(r.part) ? " (suspended)" : "") << "\n";
}

std::vector<std::string> exportFields(const std::string& directory, const Assembly& assembly)
{
    const fs::path dir(directory);
    fs::create_directories(dir);
    const std::size_t n = assembly.parts.size();
    std::vector<ElementField> rho;
    std::vector<VertexField> rhoV;
    std::vector<UniformGrid> grids;
    std::vector<Trajectory> trajectories;
    for (const Part& p : assembly.parts) {
        ElementField r = ElementField::filled(p.grid, 0.0, FieldKind::Binary);
        for (std::size_t e = 0; e < r.size(); ++e)
            r.values[e] = p.designMask.solid(e) && p.initial.solid(e) ? 1.0 : 0.0;
        rho.push_back(r);
        rhoV.push_back(elementToVertex(r));
        grids.push_back(p.grid);
        trajectories.push_back(p.trajectory);
    }
    std::optional<CollisionReport> report;
    CollisionSet cwms;
    if (n >= 2) {
        cwms = CollisionSet::assemble(grids, trajectories, assembly.settings.steps);
        report = aggregateCollision(rho, rhoV, cwms);
    }

    std::vector<std::string> written;
    auto emit = [&](const std::string& stem, const ElementField& f) {
        writeField(dir, stem, f, true);
        written.push_back((dir / (stem + ".txt")).string());
        if (f.grid.dim == 2)
            written.push_back((dir / (stem + ".pgm")).string());
    };
    for (std::size_t i = 0; i < n; ++i) {
        const Part& p = assembly.parts[i];
        const std::string label = partLabel(assembly, i);
        emit(label + "_density", rho[i]);
        ElementField tg = ElementField::filled(p.grid, 1.0, FieldKind::Scalar);
        if (report) {
            emit(label + "_collision", report->localFields[i]);
            tg = collisionSensitivity(collisionGradient(cwms, i, rhoV), &rho[i]);
            emit(label + "_collision_tg", tg);
        }
        if (assembly.settings.compliance && p.grid.dim == 2) {
            LinearElasticSystem system(p.grid, p.material, p.bc, p.designMask);
            const FeaSolution sol = system.solve(rho[i]);
            const SensitivityBundle b = makeSensitivity(&sol, p.material, rho[i], tg, assembly.settings.lambdaGOf(i));
            emit(label + "_tsf", b.complianceTSFNorm);
            emit(label + "_augmented", b.augmented);
        }
    }
    return written;
}

} // namespace codesign
