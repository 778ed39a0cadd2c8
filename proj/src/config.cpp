#include "codesign/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace codesign {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message)
{
    throw ConfigError(path + ": " + message);
}

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i)
{
    return path + "[" + std::to_string(i) + "]";
}

void requireObject(const json& j, const std::string& path)
{
    if (!j.is_object())
        fail(path, "expected an object");
}

void checkKeys(const json& j, const std::string& path, std::initializer_list<const char*> allowed)
{
    requireObject(j, path);
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            fail(join(path, key), "unknown field");
    }
}

const json* find(const json& j, const char* key)
{
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

const json& require(const json& j, const char* key, const std::string& path)
{
    const json* v = find(j, key);
    if (!v)
        fail(join(path, key), "missing required field");
    return *v;
}

double number(const json& j, const std::string& path)
{
    if (!j.is_number())
        fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        fail(path, "expected a finite number");
    return v;
}

int integer(const json& j, const std::string& path)
{
    if (!j.is_number_integer())
        fail(path, "expected an integer");
    return j.get<int>();
}

bool boolean(const json& j, const std::string& path)
{
    if (!j.is_boolean())
        fail(path, "expected true or false");
    return j.get<bool>();
}

std::string text(const json& j, const std::string& path)
{
    if (!j.is_string())
        fail(path, "expected a string");
    return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& path)
{
    if (!j.is_array())
        fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(number(j[i], index(path, i)));
    return out;
}

/// A scalar is accepted as a one-element list.
std::vector<double> numberList(const json& j, const std::string& path)
{
    if (j.is_number())
        return {number(j, path)};
    auto v = numbers(j, path);
    if (v.empty())
        fail(path, "expected at least one value");
    return v;
}

Point point(const json& j, const std::string& path)
{
    const auto v = numbers(j, path);
    if (v.size() != 2 && v.size() != 3)
        fail(path, "expected 2 or 3 coordinates");
    return Point(v[0], v[1], v.size() == 3 ? v[2] : 0.0);
}

json pointJson(const Point& p)
{
    if (p.z() == 0.0)
        return json::array({p.x(), p.y()});
    return json::array({p.x(), p.y(), p.z()});
}

Eigen::Vector2d vec2(const json& j, const std::string& path)
{
    const auto v = numbers(j, path);
    if (v.size() != 2)
        fail(path, "expected 2 components");
    return {v[0], v[1]};
}

// ---------------------------------------------------------------------------

UniformGrid parseGrid(const json& j, const std::string& path)
{
    checkKeys(j, path, {"dims", "spacing", "origin"});
    const json& dims = require(j, "dims", path);
    if (!dims.is_array() || (dims.size() != 2 && dims.size() != 3))
        fail(join(path, "dims"), "expected 2 or 3 cell counts");
    UniformGrid g;
    g.dim = static_cast<int>(dims.size());
    for (std::size_t a = 0; a < dims.size(); ++a) {
        g.cells[a] = integer(dims[a], index(join(path, "dims"), a));
        if (g.cells[a] < 1)
            fail(index(join(path, "dims"), a), "cell count must be at least 1");
    }
    g.spacing = number(require(j, "spacing", path), join(path, "spacing"));
    if (!(g.spacing > 0.0))
        fail(join(path, "spacing"), "element size must be positive");
    if (const json* o = find(j, "origin")) {
        const auto v = numbers(*o, join(path, "origin"));
        if (static_cast<int>(v.size()) != g.dim)
            fail(join(path, "origin"), "expected one coordinate per grid axis");
        for (std::size_t a = 0; a < v.size(); ++a)
            g.origin[a] = v[a];
    }
    return g;
}

json gridJson(const UniformGrid& g)
{
    json dims = json::array();
    json origin = json::array();
    for (int a = 0; a < g.dim; ++a) {
        dims.push_back(g.cells[a]);
        origin.push_back(g.origin[a]);
    }
    return {{"dims", dims}, {"spacing", g.spacing}, {"origin", origin}};
}

RegionSpec parseRegion(const json& j, const std::string& path)
{
    checkKeys(j, path, {"holes", "values"});
    RegionSpec r;
    if (const json* holes = find(j, "holes")) {
        if (!holes->is_array())
            fail(join(path, "holes"), "expected an array");
        for (std::size_t i = 0; i < holes->size(); ++i) {
            const std::string hp = index(join(path, "holes"), i);
            const json& h = (*holes)[i];
            checkKeys(h, hp, {"center", "elements", "radius"});
            HoleSpec s;
            s.center = point(require(h, "center", hp), join(hp, "center"));
            if (const json* e = find(h, "elements")) {
                const int n = integer(*e, join(hp, "elements"));
                if (n < 0)
                    fail(join(hp, "elements"), "must be nonnegative");
                s.elements = static_cast<std::size_t>(n);
            }
            if (const json* rr = find(h, "radius")) {
                s.radius = number(*rr, join(hp, "radius"));
                if (s.radius < 0.0)
                    fail(join(hp, "radius"), "must be nonnegative");
            }
            if (s.elements == 0 && s.radius == 0.0)
                fail(hp, "a hole needs 'elements' or 'radius'");
            r.holes.push_back(s);
        }
    }
    if (const json* v = find(j, "values")) {
        r.values = numbers(*v, join(path, "values"));
        for (std::size_t i = 0; i < r.values.size(); ++i)
            if (r.values[i] != 0.0 && r.values[i] != 1.0)
                fail(index(join(path, "values"), i), "binary field entries must be 0 or 1");
    }
    return r;
}

json regionJson(const RegionSpec& r)
{
    json j = json::object();
    if (!r.holes.empty()) {
        json holes = json::array();
        for (const HoleSpec& h : r.holes) {
            json hj = {{"center", pointJson(h.center)}};
            if (h.elements > 0)
                hj["elements"] = h.elements;
            if (h.radius > 0.0)
                hj["radius"] = h.radius;
            holes.push_back(hj);
        }
        j["holes"] = holes;
    }
    if (!r.values.empty())
        j["values"] = r.values;
    return j;
}

Material parseMaterial(const json& j, const std::string& path)
{
    checkKeys(j, path, {"E", "nu", "ersatz"});
    Material m;
    if (const json* v = find(j, "E"))
        m.youngs = number(*v, join(path, "E"));
    if (const json* v = find(j, "nu"))
        m.poisson = number(*v, join(path, "nu"));
    if (const json* v = find(j, "ersatz"))
        m.ersatz = number(*v, join(path, "ersatz"));
    try {
        m.validate();
    } catch (const ConfigError& e) {
        fail(path, e.what());
    }
    return m;
}

json materialJson(const Material& m)
{
    return {{"E", m.youngs}, {"nu", m.poisson}, {"ersatz", m.ersatz}};
}

NodeSelector parseSelector(const json& j, const std::string& path)
{
    checkKeys(j, path, {"corner", "edge", "point", "hole", "nodes"});
    if (j.size() != 1)
        fail(path, "expected exactly one of corner, edge, point, hole, nodes");
    if (const json* v = find(j, "corner"))
        return NodeSelector::corner(text(*v, join(path, "corner")));
    if (const json* v = find(j, "edge"))
        return NodeSelector::edge(text(*v, join(path, "edge")));
    if (const json* v = find(j, "point"))
        return NodeSelector::nearest(point(*v, join(path, "point")));
    if (const json* v = find(j, "hole")) {
        const std::string hp = join(path, "hole");
        checkKeys(*v, hp, {"center", "radius"});
        const double r = number(require(*v, "radius", hp), join(hp, "radius"));
        if (!(r > 0.0))
            fail(join(hp, "radius"), "must be positive");
        return NodeSelector::hole(point(require(*v, "center", hp), join(hp, "center")), r);
    }
    const json& nodes = require(j, "nodes", path);
    if (!nodes.is_array())
        fail(join(path, "nodes"), "expected an array of vertex indices");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const int n = integer(nodes[i], index(join(path, "nodes"), i));
        if (n < 0)
            fail(index(join(path, "nodes"), i), "vertex index must be nonnegative");
        out.push_back(static_cast<std::size_t>(n));
    }
    return NodeSelector::explicitNodes(out);
}

json selectorJson(const NodeSelector& s)
{
    switch (s.kind) {
    case NodeSelector::Kind::Corner:
        return {{"corner", s.name}};
    case NodeSelector::Kind::Edge:
        return {{"edge", s.name}};
    case NodeSelector::Kind::Point:
        return {{"point", pointJson(s.point)}};
    case NodeSelector::Kind::Hole:
        return {{"hole", {{"center", pointJson(s.point)}, {"radius", s.radius}}}};
    case NodeSelector::Kind::Nodes:
        return {{"nodes", s.nodes}};
    }
    return {};
}

BoundaryConditions parseBc(const json& j, const std::string& path)
{
    checkKeys(j, path, {"fixed", "loads"});
    BoundaryConditions bc;
    if (const json* fixed = find(j, "fixed")) {
        if (!fixed->is_array())
            fail(join(path, "fixed"), "expected an array");
        for (std::size_t i = 0; i < fixed->size(); ++i) {
            const std::string fp = index(join(path, "fixed"), i);
            const json& f = (*fixed)[i];
            checkKeys(f, fp, {"select", "axes", "value"});
            FixedDof d;
            d.nodes = parseSelector(require(f, "select", fp), join(fp, "select"));
            const std::string axes = find(f, "axes") ? text(f["axes"], join(fp, "axes")) : "xy";
            if (axes != "x" && axes != "y" && axes != "xy")
                fail(join(fp, "axes"), "expected \"x\", \"y\" or \"xy\"");
            d.fixX = axes.find('x') != std::string::npos;
            d.fixY = axes.find('y') != std::string::npos;
            if (const json* v = find(f, "value"))
                d.value = vec2(*v, join(fp, "value"));
            bc.fixed.push_back(d);
        }
    }
    if (const json* loads = find(j, "loads")) {
        if (!loads->is_array())
            fail(join(path, "loads"), "expected an array");
        for (std::size_t i = 0; i < loads->size(); ++i) {
            const std::string lp = index(join(path, "loads"), i);
            const json& l = (*loads)[i];
            checkKeys(l, lp, {"select", "force"});
            PointLoad p;
            p.nodes = parseSelector(require(l, "select", lp), join(lp, "select"));
            p.force = vec2(require(l, "force", lp), join(lp, "force"));
            bc.loads.push_back(p);
        }
    }
    return bc;
}

json bcJson(const BoundaryConditions& bc)
{
    json fixed = json::array();
    for (const FixedDof& f : bc.fixed) {
        json fj = {{"select", selectorJson(f.nodes)},
                   {"axes", std::string(f.fixX ? "x" : "") + (f.fixY ? "y" : "")}};
        if (!f.value.isZero())
            fj["value"] = json::array({f.value.x(), f.value.y()});
        fixed.push_back(fj);
    }
    json loads = json::array();
    for (const PointLoad& l : bc.loads)
        loads.push_back({{"select", selectorJson(l.nodes)}, {"force", json::array({l.force.x(), l.force.y()})}});
    return {{"fixed", fixed}, {"loads", loads}};
}

std::pair<double, double> anglePair(const json& j, const std::string& path)
{
    const auto v = numbers(j, path);
    if (v.size() != 2)
        fail(path, "expected [start, end]");
    return {v[0], v[1]};
}

Trajectory parseTrajectory(const json& j, const std::string& path)
{
    requireObject(j, path);
    const std::string kind = text(require(j, "kind", path), join(path, "kind"));
    try {
        if (kind == "static") {
            checkKeys(j, path, {"kind"});
            return Trajectory::stationary();
        }
        if (kind == "rotation") {
            checkKeys(j, path, {"kind", "pivot", "angles", "axis"});
            const auto [a0, a1] = anglePair(require(j, "angles", path), join(path, "angles"));
            Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
            if (const json* ax = find(j, "axis"))
                axis = point(*ax, join(path, "axis"));
            return Trajectory::rotation(point(require(j, "pivot", path), join(path, "pivot")), a0, a1, axis);
        }
        if (kind == "follower") {
            checkKeys(j, path, {"kind", "length", "angles"});
            const auto [a0, a1] = anglePair(require(j, "angles", path), join(path, "angles"));
            return followerTrajectory(number(require(j, "length", path), join(path, "length")), a0, a1);
        }
        if (kind == "keyframes") {
            checkKeys(j, path, {"kind", "dim", "frames"});
            KeyframeMotion m;
            if (const json* d = find(j, "dim"))
                m.dim = integer(*d, join(path, "dim"));
            const json& frames = require(j, "frames", path);
            if (!frames.is_array())
                fail(join(path, "frames"), "expected an array of [t, angle or quaternion, translation]");
            for (std::size_t i = 0; i < frames.size(); ++i) {
                const std::string fp = index(join(path, "frames"), i);
                const json& f = frames[i];
                if (!f.is_array() || f.size() != 3)
                    fail(fp, "expected [t, angle or quaternion, translation]");
                Keyframe k;
                k.t = number(f[0], index(fp, 0));
                if (m.dim == 2) {
                    k.angle = number(f[1], index(fp, 1));
                } else {
                    const auto q = numbers(f[1], index(fp, 1));
                    if (q.size() != 4)
                        fail(index(fp, 1), "expected quaternion [w, x, y, z]");
                    k.orientation = Eigen::Quaterniond(q[0], q[1], q[2], q[3]);
                    if (std::abs(k.orientation.norm() - 1.0) > 1e-9)
                        fail(index(fp, 1), "quaternion must have unit norm");
                }
                k.translation = point(f[2], index(fp, 2));
                m.frames.push_back(k);
            }
            return Trajectory::keyframes(std::move(m));
        }
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        if (msg.rfind(path, 0) == 0)
            throw;
        fail(path, msg);
    }
    fail(join(path, "kind"), "unknown trajectory kind '" + kind + "' (expected static, rotation, follower, keyframes)");
}

json trajectoryJson(const Trajectory& t)
{
    struct Visitor {
        json operator()(const StaticMotion&) const { return {{"kind", "static"}}; }
        json operator()(const RotationMotion& m) const
        {
            return {{"kind", "rotation"},
                    {"pivot", pointJson(m.pivot)},
                    {"angles", json::array({m.angleStart, m.angleEnd})},
                    {"axis", json::array({m.axis.x(), m.axis.y(), m.axis.z()})}};
        }
        json operator()(const FollowerMotion& m) const
        {
            return {{"kind", "follower"}, {"length", m.length}, {"angles", json::array({m.angleStart, m.angleEnd})}};
        }
        json operator()(const KeyframeMotion& m) const
        {
            json frames = json::array();
            for (const Keyframe& k : m.frames) {
                json rot = m.dim == 2 ? json(k.angle)
                                      : json::array({k.orientation.w(), k.orientation.x(), k.orientation.y(),
                                                     k.orientation.z()});
                frames.push_back(json::array({k.t, rot, pointJson(k.translation)}));
            }
            return {{"kind", "keyframes"}, {"dim", m.dim}, {"frames", frames}};
        }
    };
    return std::visit(Visitor{}, t.kind());
}

PartConfig parsePart(const json& j, const std::string& path)
{
    checkKeys(j, path, {"name", "grid", "design_mask", "initial_solid", "material", "bc", "trajectory"});
    PartConfig p;
    p.name = find(j, "name") ? text(j["name"], join(path, "name")) : path;
    p.grid = parseGrid(require(j, "grid", path), join(path, "grid"));
    if (const json* v = find(j, "design_mask"))
        p.designMask = parseRegion(*v, join(path, "design_mask"));
    if (const json* v = find(j, "initial_solid"))
        p.initialSolid = parseRegion(*v, join(path, "initial_solid"));
    if (const json* v = find(j, "material"))
        p.material = parseMaterial(*v, join(path, "material"));
    if (const json* v = find(j, "bc"))
        p.bc = parseBc(*v, join(path, "bc"));
    if (const json* v = find(j, "trajectory"))
        p.trajectory = parseTrajectory(*v, join(path, "trajectory"));
    return p;
}

OptimizerSettings parseOptimizer(const json& j, const std::string& path)
{
    checkKeys(j, path, {"volume_target", "gamma", "lambda_g", "max_volume_step", "tolerance", "max_inner", "max_outer",
                        "mode", "ratio_cap", "compliance"});
    OptimizerSettings s;
    if (const json* v = find(j, "volume_target"))
        s.volumeTarget = numberList(*v, join(path, "volume_target"));
    if (const json* v = find(j, "gamma"))
        s.gamma = numberList(*v, join(path, "gamma"));
    if (const json* v = find(j, "lambda_g"))
        s.lambdaG = numberList(*v, join(path, "lambda_g"));
    if (const json* v = find(j, "max_volume_step"))
        s.maxVolumeStep = number(*v, join(path, "max_volume_step"));
    if (const json* v = find(j, "tolerance"))
        s.tolerance = number(*v, join(path, "tolerance"));
    if (const json* v = find(j, "max_inner"))
        s.maxInner = integer(*v, join(path, "max_inner"));
    if (const json* v = find(j, "max_outer"))
        s.maxOuter = integer(*v, join(path, "max_outer"));
    if (const json* v = find(j, "mode")) {
        try {
            s.mode = terminationModeFromString(text(*v, join(path, "mode")));
        } catch (const ConfigError& e) {
            fail(join(path, "mode"), e.what());
        }
    }
    if (const json* v = find(j, "ratio_cap"))
        s.ratioCap = number(*v, join(path, "ratio_cap"));
    if (const json* v = find(j, "compliance"))
        s.compliance = boolean(*v, join(path, "compliance"));
    return s;
}

json optimizerJson(const OptimizerSettings& s)
{
    return {{"volume_target", s.volumeTarget}, {"gamma", s.gamma},         {"lambda_g", s.lambdaG},
            {"max_volume_step", s.maxVolumeStep}, {"tolerance", s.tolerance}, {"max_inner", s.maxInner},
            {"max_outer", s.maxOuter},            {"mode", toString(s.mode)}, {"ratio_cap", s.ratioCap},
            {"compliance", s.compliance}};
}

OutputConfig parseOutputs(const json& j, const std::string& path)
{
    checkKeys(j, path, {"directory", "checkpoints", "fields", "images", "plots"});
    OutputConfig o;
    if (const json* v = find(j, "directory"))
        o.directory = text(*v, join(path, "directory"));
    if (const json* v = find(j, "checkpoints"))
        o.checkpoints = boolean(*v, join(path, "checkpoints"));
    if (const json* v = find(j, "fields"))
        o.fields = boolean(*v, join(path, "fields"));
    if (const json* v = find(j, "images"))
        o.images = boolean(*v, join(path, "images"));
    if (const json* v = find(j, "plots"))
        o.plots = boolean(*v, join(path, "plots"));
    return o;
}

RunConfig fromJson(const json& j)
{
    checkKeys(j, "config", {"parts", "optimizer", "collision", "outputs"});
    RunConfig c;
    const json& parts = require(j, "parts", "config");
    if (!parts.is_array() || parts.empty())
        fail("parts", "expected a nonempty array of parts");
    for (std::size_t i = 0; i < parts.size(); ++i)
        c.parts.push_back(parsePart(parts[i], index("parts", i)));
    if (const json* v = find(j, "optimizer"))
        c.optimizer = parseOptimizer(*v, "optimizer");
    if (const json* v = find(j, "collision")) {
        checkKeys(*v, "collision", {"steps"});
        if (const json* k = find(*v, "steps"))
            c.optimizer.steps = integer(*k, "collision.steps");
    }
    if (const json* v = find(j, "outputs"))
        c.outputs = parseOutputs(*v, "outputs");
    validateConfig(c);
    return c;
}

} // namespace

ElementField buildRegion(const UniformGrid& grid, const RegionSpec& spec)
{
    ElementField f = ElementField::filled(grid, 1.0, FieldKind::Binary);
    if (!spec.values.empty()) {
        f.values = spec.values;
        f.validate();
    }
    for (const HoleSpec& h : spec.holes) {
        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(grid.elementCount());
        for (std::size_t e = 0; e < grid.elementCount(); ++e)
            dist.emplace_back((grid.elementCenter(e) - h.center).norm(), e);
        if (h.elements > 0) {
            if (h.elements > dist.size())
                throw ConfigError("hole removes more elements than the grid holds");
            std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(h.elements - 1), dist.end());
            std::sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(h.elements));
            for (std::size_t k = 0; k < h.elements; ++k)
                f.values[dist[k].second] = 0.0;
        }
        if (h.radius > 0.0)
            for (const auto& [d, e] : dist)
                if (d <= h.radius)
                    f.values[e] = 0.0;
    }
    return f;
}

void validateConfig(const RunConfig& c)
{
    if (c.parts.empty())
        fail("parts", "at least one part is required");
    for (std::size_t i = 0; i < c.parts.size(); ++i) {
        const PartConfig& p = c.parts[i];
        const std::string path = index("parts", i);
        try {
            p.grid.validate();
        } catch (const ConfigError& e) {
            fail(join(path, "grid"), e.what());
        }
        if (p.grid.dim != 2 && c.optimizer.compliance)
            fail(join(path, "grid"), "elasticity is implemented for 2D grids only");
        ElementField mask;
        try {
            mask = buildRegion(p.grid, p.designMask);
        } catch (const ConfigError& e) {
            fail(join(path, "design_mask"), e.what());
        }
        if (mask.countSolid() == 0)
            fail(join(path, "design_mask"), "degenerate design domain (no design elements)");
        try {
            buildRegion(p.grid, p.initialSolid);
        } catch (const ConfigError& e) {
            fail(join(path, "initial_solid"), e.what());
        }
        try {
            p.material.validate();
        } catch (const ConfigError& e) {
            fail(join(path, "material"), e.what());
        }
        if (p.grid.dim == 2) {
            for (std::size_t k = 0; k < p.bc.fixed.size(); ++k)
                try {
                    p.bc.fixed[k].nodes.resolve(p.grid, mask);
                } catch (const ConfigError& e) {
                    fail(index(join(path, "bc.fixed"), k), e.what());
                }
            for (std::size_t k = 0; k < p.bc.loads.size(); ++k)
                try {
                    p.bc.loads[k].nodes.resolve(p.grid, mask);
                } catch (const ConfigError& e) {
                    fail(index(join(path, "bc.loads"), k), e.what());
                }
        }
    }
    try {
        c.optimizer.validate(c.parts.size());
    } catch (const ConfigError& e) {
        fail("optimizer", e.what());
    }
}

RunConfig parseConfigText(const std::string& textIn)
{
    json j;
    try {
        j = json::parse(textIn);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    return fromJson(j);
}

RunConfig parseConfig(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parseConfigText(ss.str());
}

std::string writeConfigText(const RunConfig& c)
{
    json parts = json::array();
    for (const PartConfig& p : c.parts)
        parts.push_back({{"name", p.name},
                         {"grid", gridJson(p.grid)},
                         {"design_mask", regionJson(p.designMask)},
                         {"initial_solid", regionJson(p.initialSolid)},
                         {"material", materialJson(p.material)},
                         {"bc", bcJson(p.bc)},
                         {"trajectory", trajectoryJson(p.trajectory)}});
    json j = {{"parts", parts},
              {"optimizer", optimizerJson(c.optimizer)},
              {"collision", {{"steps", c.optimizer.steps}}},
              {"outputs",
               {{"directory", c.outputs.directory},
                {"checkpoints", c.outputs.checkpoints},
                {"fields", c.outputs.fields},
                {"images", c.outputs.images},
                {"plots", c.outputs.plots}}}};
    return j.dump(2) + "\n";
}

void writeConfig(const std::string& path, const RunConfig& config)
{
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write config file '" + path + "'");
    out << writeConfigText(config);
}

Part buildPart(const PartConfig& c)
{
    Part p;
    p.name = c.name;
    p.grid = c.grid;
    p.designMask = buildRegion(c.grid, c.designMask);
    p.initial = buildRegion(c.grid, c.initialSolid);
    p.material = c.material;
    p.bc = c.bc;
    p.trajectory = c.trajectory;
    return p;
}

Assembly buildAssembly(const RunConfig& config)
{
    validateConfig(config);
    Assembly a;
    for (const PartConfig& p : config.parts)
        a.parts.push_back(buildPart(p));
    a.settings = config.optimizer;
    return a;
}

} // namespace codesign
