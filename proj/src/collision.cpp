#include "codesign/collision.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "codesign/parallel.hpp"

namespace codesign {

namespace {
std::atomic<std::uint64_t> g_assemblies{0};
}

CollisionWeightMatrix::CollisionWeightMatrix(UniformGrid stationary, UniformGrid moving, int steps,
                                             std::vector<std::size_t> colStart, std::vector<std::uint32_t> rowIndex,
                                             std::vector<std::uint32_t> counts)
    : stationary_(std::move(stationary)), moving_(std::move(moving)), steps_(steps), colStart_(std::move(colStart)),
      rowIndex_(std::move(rowIndex)), counts_(std::move(counts))
{
    if (steps_ < 1)
        throw ConfigError("collision weight matrix: step count must be at least 1");
    if (stationary_.dim != moving_.dim)
        throw ConfigError("collision weight matrix: grids differ in dimension");
    if (colStart_.size() != cols() + 1 || colStart_.front() != 0 || colStart_.back() != rowIndex_.size() ||
        rowIndex_.size() != counts_.size())
        throw ConfigError("collision weight matrix: inconsistent compressed layout");
    for (std::size_t c = 0; c < cols(); ++c) {
        if (colStart_[c] > colStart_[c + 1])
            throw ConfigError("collision weight matrix: column starts must be non-decreasing");
        std::uint64_t total = 0;
        for (std::size_t k = colStart_[c]; k < colStart_[c + 1]; ++k) {
            if (rowIndex_[k] >= rows())
                throw ConfigError("collision weight matrix: row index out of range");
            if (k > colStart_[c] && rowIndex_[k] <= rowIndex_[k - 1])
                throw ConfigError("collision weight matrix: rows within a column must be strictly increasing");
            total += counts_[k];
        }
        if (total > static_cast<std::uint64_t>(steps_))
            throw ConfigError("collision weight matrix: a vertex cannot occupy cells for more than K steps");
    }
}

std::uint32_t CollisionWeightMatrix::count(std::size_t row, std::size_t col) const
{
    const auto first = rowIndex_.begin() + static_cast<std::ptrdiff_t>(colStart_[col]);
    const auto last = rowIndex_.begin() + static_cast<std::ptrdiff_t>(colStart_[col + 1]);
    const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(row));
    if (it == last || *it != row)
        return 0;
    return counts_[static_cast<std::size_t>(it - rowIndex_.begin())];
}

std::uint64_t CollisionWeightMatrix::columnCount(std::size_t col) const
{
    std::uint64_t total = 0;
    for (std::size_t k = colStart_[col]; k < colStart_[col + 1]; ++k)
        total += counts_[k];
    return total;
}

std::uint64_t cwmAssemblyCount()
{
    return g_assemblies.load();
}

CollisionWeightMatrix assembleCWM(const UniformGrid& stationaryGrid, const UniformGrid& movingGrid,
                                  const RelativeTrajectory& rel, int steps)
{
    stationaryGrid.validate();
    movingGrid.validate();
    if (stationaryGrid.dim != movingGrid.dim)
        throw ConfigError("assembleCWM: grids differ in dimension");
    if (stationaryGrid.elementCount() > UINT32_MAX)
        throw ConfigError("assembleCWM: stationary grid too large for 32-bit row indices");
    const std::vector<RigidTransform> samples = sampleUniform(rel, steps);
    ++g_assemblies;

    // Columns are independent, so each vertex is processed in isolation and the
    // result does not depend on the thread count.
    const std::size_t nv = movingGrid.vertexCount();
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> columns(nv);

    const auto work = [&](std::size_t v, std::vector<std::uint32_t>& hits) {
        hits.clear();
        const Point p = movingGrid.vertexPosition(v);
        for (const RigidTransform& tk : samples)
            if (auto cell = locateCell(stationaryGrid, tk.apply(p)))
                hits.push_back(static_cast<std::uint32_t>(*cell));
        if (hits.empty())
            return;
        std::sort(hits.begin(), hits.end());
        auto& col = columns[v];
        for (std::size_t a = 0; a < hits.size();) {
            std::size_t b = a;
            while (b < hits.size() && hits[b] == hits[a])
                ++b;
            col.emplace_back(hits[a], static_cast<std::uint32_t>(b - a));
            a = b;
        }
    };

#ifdef _OPENMP
#pragma omp parallel num_threads(threadCount())
    {
        std::vector<std::uint32_t> hits;
#pragma omp for schedule(dynamic, 256)
        for (std::ptrdiff_t v = 0; v < static_cast<std::ptrdiff_t>(nv); ++v)
            work(static_cast<std::size_t>(v), hits);
    }
#else
    std::vector<std::uint32_t> hits;
    for (std::size_t v = 0; v < nv; ++v)
        work(v, hits);
#endif

    std::vector<std::size_t> colStart(nv + 1, 0);
    for (std::size_t v = 0; v < nv; ++v)
        colStart[v + 1] = colStart[v] + columns[v].size();
    std::vector<std::uint32_t> rowIndex(colStart.back());
    std::vector<std::uint32_t> counts(colStart.back());
    for (std::size_t v = 0; v < nv; ++v) {
        std::size_t k = colStart[v];
        for (const auto& [row, c] : columns[v]) {
            rowIndex[k] = row;
            counts[k] = c;
            ++k;
        }
    }
    return CollisionWeightMatrix(stationaryGrid, movingGrid, steps, std::move(colStart), std::move(rowIndex),
                                 std::move(counts));
}

namespace {

void checkShapes(const ElementField& rhoE, const CollisionWeightMatrix& w, const VertexField& rhoV)
{
    if (rhoE.size() != w.rows() || rhoV.size() != w.cols())
        throw ConfigError("collision measure: field lengths (" + std::to_string(rhoE.size()) + ", " +
                          std::to_string(rhoV.size()) + ") do not match matrix dimensions (" +
                          std::to_string(w.rows()) + ", " + std::to_string(w.cols()) + ")");
}

} // namespace

std::int64_t collisionCount(const ElementField& rhoE, const CollisionWeightMatrix& w, const VertexField& rhoV)
{
    checkShapes(rhoE, w, rhoV);
    const auto start = w.colStart();
    const auto rows = w.rowIndex();
    const auto counts = w.counts();
    std::int64_t total = 0;
    for (std::size_t v = 0; v < w.cols(); ++v) {
        if (rhoV.values[v] == 0.0)
            continue;
        for (std::size_t k = start[v]; k < start[v + 1]; ++k)
            if (rhoE.values[rows[k]] != 0.0)
                total += counts[k];
    }
    return total;
}

double collisionMeasure(const ElementField& rhoE, const CollisionWeightMatrix& w, const VertexField& rhoV)
{
    return w.quantum() * static_cast<double>(collisionCount(rhoE, w, rhoV));
}

std::vector<std::int64_t> weightedCounts(const CollisionWeightMatrix& w, const VertexField& rhoV)
{
    if (rhoV.size() != w.cols())
        throw ConfigError("collision gradient: vertex field length does not match matrix columns");
    std::vector<std::int64_t> out(w.rows(), 0);
    const auto start = w.colStart();
    const auto rows = w.rowIndex();
    const auto counts = w.counts();
    for (std::size_t v = 0; v < w.cols(); ++v) {
        if (rhoV.values[v] == 0.0)
            continue;
        for (std::size_t k = start[v]; k < start[v + 1]; ++k)
            out[rows[k]] += counts[k];
    }
    return out;
}

CollisionSet CollisionSet::assemble(const std::vector<UniformGrid>& grids, const std::vector<Trajectory>& trajectories,
                                    int steps)
{
    if (grids.size() != trajectories.size())
        throw ConfigError("CollisionSet::assemble: one trajectory per grid required");
    const std::size_t n = grids.size();
    CollisionSet set(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j)
                set.set(i, j, assembleCWM(grids[i], grids[j], RelativeTrajectory{trajectories[i], trajectories[j]},
                                          steps));
    return set;
}

void CollisionSet::set(std::size_t i, std::size_t j, CollisionWeightMatrix w)
{
    if (i >= parts_ || j >= parts_ || i == j)
        throw ConfigError("CollisionSet::set: invalid pair");
    matrices_[i * parts_ + j] = std::move(w);
}

bool CollisionSet::has(std::size_t i, std::size_t j) const
{
    return i < parts_ && j < parts_ && matrices_[i * parts_ + j].has_value();
}

const CollisionWeightMatrix& CollisionSet::get(std::size_t i, std::size_t j) const
{
    if (!has(i, j))
        throw ConfigError("missing collision weight matrix for pair (" + std::to_string(i) + ", " +
                          std::to_string(j) + ")");
    return *matrices_[i * parts_ + j];
}

bool CollisionReport::collisionFree() const
{
    return std::all_of(aggregateCounts.begin(), aggregateCounts.end(), [](std::int64_t c) { return c == 0; });
}

CollisionReport aggregateCollision(const std::vector<ElementField>& rhoE, const std::vector<VertexField>& rhoV,
                                   const CollisionSet& cwms)
{
    const std::size_t n = rhoE.size();
    if (rhoV.size() != n || cwms.parts() != n)
        throw ConfigError("aggregateCollision: part counts disagree");
    CollisionReport r;
    r.parts = n;
    r.pairwise.assign(n * n, 0.0);
    r.pairwiseCounts.assign(n * n, 0);
    r.aggregate.assign(n, 0.0);
    r.aggregateCounts.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        ElementField local = ElementField::filled(rhoE[i].grid, 0.0, FieldKind::Scalar);
        double quantum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            const CollisionWeightMatrix& w = cwms.get(i, j);
            quantum = w.quantum();
            const std::vector<std::int64_t> grad = weightedCounts(w, rhoV[j]);
            if (grad.size() != rhoE[i].size())
                throw ConfigError("aggregateCollision: design length does not match matrix rows");
            std::int64_t pairTotal = 0;
            for (std::size_t e = 0; e < grad.size(); ++e) {
                if (rhoE[i].values[e] == 0.0 || grad[e] == 0)
                    continue;
                pairTotal += grad[e];
                local.values[e] += static_cast<double>(grad[e]);
            }
            r.pairwiseCounts[i * n + j] = pairTotal;
            r.pairwise[i * n + j] = w.quantum() * static_cast<double>(pairTotal);
            r.aggregateCounts[i] += pairTotal;
        }
        r.aggregate[i] = quantum * static_cast<double>(r.aggregateCounts[i]);
        for (double& v : local.values)
            v *= quantum;
        r.localFields.push_back(std::move(local));
    }
    return r;
}

std::vector<std::int64_t> collisionGradientCounts(const CollisionSet& cwms, std::size_t part,
                                                  const std::vector<VertexField>& rhoV)
{
    if (rhoV.size() != cwms.parts() || part >= cwms.parts())
        throw ConfigError("collisionGradient: part index or vertex field count is invalid");
    std::vector<std::int64_t> out;
    for (std::size_t j = 0; j < cwms.parts(); ++j) {
        if (j == part)
            continue;
        const std::vector<std::int64_t> g = weightedCounts(cwms.get(part, j), rhoV[j]);
        if (out.empty())
            out.assign(g.size(), 0);
        for (std::size_t e = 0; e < g.size(); ++e)
            out[e] += g[e];
    }
    return out;
}

ElementField collisionGradient(const CollisionSet& cwms, std::size_t part, const std::vector<VertexField>& rhoV)
{
    if (cwms.parts() < 2)
        throw ConfigError("collisionGradient: need at least two parts");
    const std::size_t other = part == 0 ? 1 : 0;
    const CollisionWeightMatrix& w = cwms.get(part, other);
    ElementField out = ElementField::filled(w.stationaryGrid(), 0.0, FieldKind::Scalar);
    const std::vector<std::int64_t> counts = collisionGradientCounts(cwms, part, rhoV);
    for (std::size_t e = 0; e < counts.size(); ++e)
        out.values[e] = w.quantum() * static_cast<double>(counts[e]);
    return out;
}

ElementField reverseCollisionPressure(const CollisionSet& cwms, std::size_t part, const std::vector<ElementField>& rhoE)
{
    if (cwms.parts() < 2)
        throw ConfigError("reverseCollisionPressure: need at least two parts");
    if (rhoE.size() != cwms.parts())
        throw ConfigError("reverseCollisionPressure: part counts disagree");
    const UniformGrid& grid = rhoE[part].grid;
    std::vector<double> vertexLoad(grid.vertexCount(), 0.0);
    for (std::size_t j = 0; j < cwms.parts(); ++j) {
        if (j == part)
            continue;
        const CollisionWeightMatrix& w = cwms.get(j, part);
        const auto colStart = w.colStart();
        const auto rows = w.rowIndex();
        const auto counts = w.counts();
        for (std::size_t v = 0; v < w.cols(); ++v) {
            std::uint64_t hits = 0;
            for (std::size_t k = colStart[v]; k < colStart[v + 1]; ++k)
                if (rhoE[j].solid(rows[k]))
                    hits += counts[k];
            vertexLoad[v] += w.quantum() * static_cast<double>(hits);
        }
    }
    ElementField out = ElementField::filled(grid, 0.0, FieldKind::Scalar);
    for (std::size_t e = 0; e < out.size(); ++e)
        for (std::size_t v : grid.elementVertices(e))
            out.values[e] += vertexLoad[v];
    return out;
}

CollisionTracker::CollisionTracker(const CollisionSet& cwms, std::vector<VertexField> rhoV)
    : cwms_(&cwms), rhoV_(std::move(rhoV))
{
    const std::size_t n = cwms.parts();
    if (rhoV_.size() != n)
        throw ConfigError("CollisionTracker: one vertex field per part required");
    products_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j)
                products_[i * n + j] = weightedCounts(cwms.get(i, j), rhoV_[j]);
}

void CollisionTracker::update(std::size_t part, const VertexField& rhoV)
{
    const std::size_t n = cwms_->parts();
    if (part >= n || rhoV.size() != rhoV_[part].size())
        throw ConfigError("CollisionTracker::update: invalid part or field length");
    std::vector<std::size_t> changed;
    for (std::size_t v = 0; v < rhoV.size(); ++v)
        if ((rhoV.values[v] != 0.0) != rhoV_[part].solid(v))
            changed.push_back(v);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == part)
            continue;
        const CollisionWeightMatrix& w = cwms_->get(i, part);
        const auto start = w.colStart();
        const auto rows = w.rowIndex();
        const auto counts = w.counts();
        std::vector<std::int64_t>& prod = products_[i * n + part];
        for (std::size_t v : changed) {
            const std::int64_t sign = rhoV.values[v] != 0.0 ? 1 : -1;
            for (std::size_t k = start[v]; k < start[v + 1]; ++k)
                prod[rows[k]] += sign * static_cast<std::int64_t>(counts[k]);
        }
    }
    rhoV_[part] = rhoV;
}

std::vector<std::int64_t> CollisionTracker::gradientCounts(std::size_t part) const
{
    const std::size_t n = cwms_->parts();
    std::vector<std::int64_t> out;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == part)
            continue;
        const auto& p = products_[part * n + j];
        if (out.empty())
            out.assign(p.size(), 0);
        for (std::size_t e = 0; e < p.size(); ++e)
            out[e] += p[e];
    }
    return out;
}

ElementField CollisionTracker::gradient(std::size_t part) const
{
    const CollisionWeightMatrix& w = cwms_->get(part, part == 0 ? 1 : 0);
    ElementField out = ElementField::filled(w.stationaryGrid(), 0.0, FieldKind::Scalar);
    const std::vector<std::int64_t> counts = gradientCounts(part);
    for (std::size_t e = 0; e < counts.size(); ++e)
        out.values[e] = w.quantum() * static_cast<double>(counts[e]);
    return out;
}

CollisionReport CollisionTracker::report(const std::vector<ElementField>& rhoE) const
{
    const std::size_t n = cwms_->parts();
    if (rhoE.size() != n)
        throw ConfigError("CollisionTracker::report: part counts disagree");
    CollisionReport r;
    r.parts = n;
    r.pairwise.assign(n * n, 0.0);
    r.pairwiseCounts.assign(n * n, 0);
    r.aggregate.assign(n, 0.0);
    r.aggregateCounts.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        ElementField local = ElementField::filled(rhoE[i].grid, 0.0, FieldKind::Scalar);
        const double quantum = cwms_->get(i, i == 0 ? 1 : 0).quantum();
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            const auto& p = products_[i * n + j];
            std::int64_t pairTotal = 0;
            for (std::size_t e = 0; e < p.size(); ++e) {
                if (rhoE[i].values[e] == 0.0 || p[e] == 0)
                    continue;
                pairTotal += p[e];
                local.values[e] += static_cast<double>(p[e]);
            }
            r.pairwiseCounts[i * n + j] = pairTotal;
            r.pairwise[i * n + j] = quantum * static_cast<double>(pairTotal);
            r.aggregateCounts[i] += pairTotal;
        }
        r.aggregate[i] = quantum * static_cast<double>(r.aggregateCounts[i]);
        for (double& v : local.values)
            v *= quantum;
        r.localFields.push_back(std::move(local));
    }
    return r;
}

ElementField collisionSensitivity(const ElementField& grad, const ElementField* mask)
{
    if (mask && mask->grid != grad.grid)
        throw ConfigError("collisionSensitivity: mask lives on a different grid");
    double gmax = 0.0;
    for (std::size_t e = 0; e < grad.size(); ++e)
        if (!mask || mask->values[e] != 0.0)
            gmax = std::max(gmax, grad.values[e]);
    ElementField out = ElementField::filled(grad.grid, 1.0, FieldKind::Scalar);
    if (gmax <= 0.0)
        return out;
    for (std::size_t e = 0; e < grad.size(); ++e) {
        const double t = 1.0 - grad.values[e] / gmax;
        out.values[e] = mask ? std::clamp(t, 0.0, 1.0) : t;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Binary cache

namespace {

constexpr char kMagic[4] = {'C', 'W', 'M', '1'};

template <class T>
void put(std::ostream& out, T v)
{
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in)
{
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in)
        throw ConfigError("collision weight file: truncated");
    return v;
}

void putGrid(std::ostream& out, const UniformGrid& g)
{
    put<std::int32_t>(out, g.dim);
    for (int a = 0; a < 3; ++a)
        put<std::int32_t>(out, g.cells[a]);
    put<double>(out, g.spacing);
    for (int a = 0; a < 3; ++a)
        put<double>(out, g.origin[a]);
}

UniformGrid getGrid(std::istream& in)
{
    UniformGrid g;
    g.dim = get<std::int32_t>(in);
    for (int a = 0; a < 3; ++a)
        g.cells[a] = get<std::int32_t>(in);
    g.spacing = get<double>(in);
    for (int a = 0; a < 3; ++a)
        g.origin[a] = get<double>(in);
    g.validate();
    return g;
}

} // namespace

void writeCWM(std::ostream& out, const CollisionWeightMatrix& w)
{
    static_assert(std::endian::native == std::endian::little, "binary cache assumes a little-endian host");
    out.write(kMagic, 4);
    putGrid(out, w.stationaryGrid());
    putGrid(out, w.movingGrid());
    put<double>(out, w.stationaryGrid().spacing);
    put<double>(out, w.timeStep());
    put<std::int32_t>(out, w.steps());
    put<std::uint64_t>(out, w.nonZeros());
    const auto start = w.colStart();
    const auto rows = w.rowIndex();
    const auto counts = w.counts();
    for (std::size_t c = 0; c < w.cols(); ++c)
        for (std::size_t k = start[c]; k < start[c + 1]; ++k) {
            put<std::uint32_t>(out, rows[k]);
            put<std::uint32_t>(out, static_cast<std::uint32_t>(c));
            put<std::uint32_t>(out, counts[k]);
        }
    if (!out)
        throw Error("collision weight file: write failed");
}

void writeCWM(const std::string& path, const CollisionWeightMatrix& w)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open " + path + " for writing");
    writeCWM(out, w);
}

CollisionWeightMatrix readCWM(std::istream& in)
{
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw ConfigError("collision weight file: bad magic");
    UniformGrid stationary = getGrid(in);
    UniformGrid moving = getGrid(in);
    const double spacing = get<double>(in);
    const double dt = get<double>(in);
    const int steps = get<std::int32_t>(in);
    if (spacing != stationary.spacing || steps < 1 || dt != 1.0 / steps)
        throw ConfigError("collision weight file: inconsistent header");
    const auto nnz = get<std::uint64_t>(in);

    const std::size_t nv = moving.vertexCount();
    std::vector<std::size_t> colStart(nv + 1, 0);
    std::vector<std::uint32_t> rowIndex(nnz);
    std::vector<std::uint32_t> counts(nnz);
    std::vector<std::uint32_t> cols(nnz);
    for (std::uint64_t k = 0; k < nnz; ++k) {
        rowIndex[k] = get<std::uint32_t>(in);
        cols[k] = get<std::uint32_t>(in);
        counts[k] = get<std::uint32_t>(in);
        if (cols[k] >= nv || (k > 0 && cols[k] < cols[k - 1]))
            throw ConfigError("collision weight file: records must be sorted by column");
        ++colStart[cols[k] + 1];
    }
    for (std::size_t c = 0; c < nv; ++c)
        colStart[c + 1] += colStart[c];
    return CollisionWeightMatrix(std::move(stationary), std::move(moving), steps, std::move(colStart),
                                 std::move(rowIndex), std::move(counts));
}

CollisionWeightMatrix readCWM(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path);
    return readCWM(in);
}

} // namespace codesign
