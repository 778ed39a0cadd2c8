#include "codesign/scenarios.hpp"

#include <cmath>
#include <numbers>

namespace codesign {

namespace {

constexpr double kPi = std::numbers::pi;

int scaled(int n, double scale)
{
    return std::max(1, static_cast<int>(std::lround(n * scale)));
}

std::size_t scaledCount(int n, double scale)
{
    return static_cast<std::size_t>(std::max(1L, std::lround(n * scale * scale)));
}

/// Square part of side `side` centered at `center` with a central hole fixed on its rim
/// and a single point load.
PartConfig holedSquare(const std::string& name, const Point& center, double side, int cells, int holeElements,
                       double scale, const Point& loadAt, const Eigen::Vector2d& force)
{
    PartConfig p;
    p.name = name;
    const int n = scaled(cells, scale);
    const double h = side / n;
    p.grid = UniformGrid::make2d(center.x() - side / 2, center.y() - side / 2, h, n, n);
    const std::size_t hole = scaledCount(holeElements, scale);
    p.designMask.holes.push_back(HoleSpec{center, hole, 0.0});
    const double holeRadius = std::sqrt(static_cast<double>(hole) * h * h / kPi);
    p.bc.fixed.push_back(FixedDof{NodeSelector::hole(center, holeRadius + 2 * h), true, true, {0.0, 0.0}});
    p.bc.loads.push_back(PointLoad{NodeSelector::nearest(loadAt), force});
    return p;
}

RunConfig camFollower(double scale)
{
    RunConfig c;

    PartConfig follower;
    follower.name = "follower";
    {
        const int nx = scaled(200, scale);
        const int ny = scaled(50, scale);
        const double h = 24.0 / nx;
        follower.grid = UniformGrid::make2d(-12.0, 0.5, h, nx, ny);
    }
    follower.bc.fixed.push_back(FixedDof{NodeSelector::corner("bottom-left"), false, true, {0.0, 0.0}});
    follower.bc.fixed.push_back(FixedDof{NodeSelector::corner("bottom-right"), true, true, {0.0, 0.0}});
    follower.bc.loads.push_back(PointLoad{NodeSelector::corner("top-left"), {1.0, 0.0}});
    follower.trajectory = followerTrajectory(4.0, 0.0, 2 * kPi);

    PartConfig cam = holedSquare("cam", Point(0.0, 8.0, 0.0), 6.0, 150, 2500, scale, Point(3.0, 11.0, 0.0),
                                 {0.0, -1.0});
    cam.bc.loads.front().nodes = NodeSelector::corner("top-right");
    cam.trajectory = Trajectory::rotation(Point(0.0, 8.0, 0.0), 0.0, 2 * kPi);

    c.parts = {follower, cam};
    c.optimizer.lambdaG = {0.2};
    c.optimizer.gamma = {1.0, 0.5};
    c.optimizer.volumeTarget = {0.05};
    c.optimizer.mode = TerminationMode::CollisionFree;
    c.optimizer.steps = 1000;
    c.outputs.directory = "run-cam-follower";
    return c;
}

RunConfig threeSquares(double scale)
{
    RunConfig c;
    const Point centers[3] = {Point(0.0, 0.0, 0.0), Point(9.5, 0.0, 0.0), Point(4.75, 8.5, 0.0)};
    const double angles[3][2] = {{kPi / 2, kPi / 5}, {0.0, 3 * kPi / 10}, {kPi / 2, -3 * kPi / 2}};
    const Eigen::Vector2d forces[3] = {{1.0, 0.0}, {1.0, 1.0}, {-1.0, 1.0}};
    for (int i = 0; i < 3; ++i) {
        PartConfig p = holedSquare("square" + std::to_string(i + 1), centers[i], 8.0, 80, 400, scale,
                                   centers[i] + Point(0.0, 4.0, 0.0), forces[i]);
        p.trajectory = Trajectory::rotation(centers[i], angles[i][0], angles[i][1]);
        c.parts.push_back(p);
    }
    c.optimizer.lambdaG = {0.5};
    c.optimizer.gamma = {1.0};
    c.optimizer.volumeTarget = {0.05};
    c.optimizer.mode = TerminationMode::CollisionFree;
    c.optimizer.steps = 500;
    c.outputs.directory = "run-three-squares";
    return c;
}

RunConfig gripperCams(double scale)
{
    RunConfig c;
    PartConfig gripper;
    gripper.name = "gripper";
    {
        const int nx = scaled(100, scale);
        const int ny = scaled(60, scale);
        gripper.grid = UniformGrid::make2d(-5.0, 0.0, 10.0 / nx, nx, ny);
    }
    gripper.bc.fixed.push_back(FixedDof{NodeSelector::edge("bottom"), true, true, {0.0, 0.0}});
    gripper.bc.loads.push_back(PointLoad{NodeSelector::corner("top-left"), {1.0, 0.0}});
    gripper.trajectory = Trajectory::rotation(Point(0.0, 3.0, 0.0), 0.0, kPi / 2);

    PartConfig cam1 = holedSquare("cam1", Point(-7.0, 3.0, 0.0), 4.0, 80, 400, scale, Point(-5.0, 5.0, 0.0),
                                  {0.0, -1.0});
    cam1.bc.loads.front().nodes = NodeSelector::corner("top-right");
    cam1.trajectory = Trajectory::rotation(Point(-7.0, 3.0, 0.0), 0.0, kPi);
    PartConfig cam2 = holedSquare("cam2", Point(7.0, 3.0, 0.0), 4.0, 80, 400, scale, Point(9.0, 5.0, 0.0),
                                  {0.0, -1.0});
    cam2.bc.loads.front().nodes = NodeSelector::corner("top-right");
    cam2.trajectory = Trajectory::rotation(Point(7.0, 3.0, 0.0), kPi / 2, -3 * kPi / 2);

    c.parts = {gripper, cam1, cam2};
    c.optimizer.lambdaG = {0.5};
    c.optimizer.gamma = {1.0};
    c.optimizer.volumeTarget = {0.6};
    c.optimizer.mode = TerminationMode::VolumeTarget;
    c.optimizer.steps = 500;
    c.outputs.directory = "run-gripper-cams";
    return c;
}

RunConfig translatingSquares(double scale)
{
    RunConfig c;
    const int n = scaled(64, scale);
    const double h = 1.0 / n;
    for (int i = 0; i < 2; ++i) {
        PartConfig p;
        p.name = i == 0 ? "A" : "B";
        p.grid = UniformGrid::make2d(i == 0 ? 0.0 : 2.0, 0.0, h, n, n);
        p.bc.fixed.push_back(FixedDof{NodeSelector::edge("bottom"), true, true, {0.0, 0.0}});
        p.bc.loads.push_back(PointLoad{NodeSelector::corner("top-right"), {1.0, 0.0}});
        c.parts.push_back(p);
    }
    KeyframeMotion slide;
    slide.dim = 2;
    Keyframe k0;
    Keyframe k1;
    k1.t = 1.0;
    k1.translation = Point(-2.0, 0.0, 0.0);
    slide.frames = {k0, k1};
    c.parts[1].trajectory = Trajectory::keyframes(slide);
    c.optimizer.lambdaG = {1.0};
    c.optimizer.gamma = {1.0};
    c.optimizer.volumeTarget = {0.05};
    c.optimizer.steps = 1000;
    c.outputs.directory = "run-translating-squares";
    return c;
}

} // namespace

std::vector<std::string> scenarioNames()
{
    return {"cam-follower", "three-squares", "gripper-cams", "translating-squares"};
}

RunConfig builtinScenario(const std::string& name, double scale)
{
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw ConfigError("scenario scale must be positive");
    RunConfig c;
    if (name == "cam-follower")
        c = camFollower(scale);
    else if (name == "three-squares")
        c = threeSquares(scale);
    else if (name == "gripper-cams")
        c = gripperCams(scale);
    else if (name == "translating-squares")
        c = translatingSquares(scale);
    else {
        std::string list;
        for (const std::string& n : scenarioNames())
            list += (list.empty() ? "" : ", ") + n;
        throw ConfigError("unknown scenario '" + name + "' (options: " + list + ")");
    }
    validateConfig(c);
    return c;
}

} // namespace codesign
