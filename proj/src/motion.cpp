#include "codesign/motion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace codesign {

RigidTransform RigidTransform::fromTranslation(const Eigen::Vector3d& t)
{
    RigidTransform r;
    r.translation = t;
    return r;
}

RigidTransform RigidTransform::rotationAbout(const Eigen::Vector3d& axis, double angle, const Point& pivot)
{
    RigidTransform r;
    r.rotation = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
    r.translation = pivot - r.rotation * pivot;
    return r;
}

RigidTransform RigidTransform::inverse() const
{
    RigidTransform r;
    r.rotation = rotation.transpose();
    r.translation = -(r.rotation * translation);
    return r;
}

RigidTransform RigidTransform::operator*(const RigidTransform& rhs) const
{
    RigidTransform r;
    r.rotation = rotation * rhs.rotation;
    r.translation = rotation * rhs.translation + translation;
    return r;
}

bool RigidTransform::isApprox(const RigidTransform& other, double tol) const
{
    return (rotation - other.rotation).cwiseAbs().maxCoeff() <= tol &&
           (translation - other.translation).cwiseAbs().maxCoeff() <= tol;
}

double RigidTransform::orthonormalityError() const
{
    const double ortho = (rotation.transpose() * rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    return std::max(ortho, std::abs(rotation.determinant() - 1.0));
}

namespace {

void checkTime(double t)
{
    if (!(t >= 0.0 && t <= 1.0))
        throw ConfigError("trajectory time " + std::to_string(t) + " is outside [0, 1]");
}

void validateKeyframes(const KeyframeMotion& m)
{
    if (m.dim != 2 && m.dim != 3)
        throw ConfigError("keyframes: dimension must be 2 or 3");
    if (m.frames.size() < 2)
        throw ConfigError("keyframes: need at least two frames");
    if (m.frames.front().t != 0.0 || m.frames.back().t != 1.0)
        throw ConfigError("keyframes: first frame must be at t = 0 and last at t = 1");
    for (std::size_t i = 1; i < m.frames.size(); ++i)
        if (!(m.frames[i].t > m.frames[i - 1].t))
            throw ConfigError("keyframes: times must be strictly increasing");
    const Keyframe& f0 = m.frames.front();
    const bool identity = m.dim == 2 ? f0.angle == 0.0
                                     : f0.orientation.angularDistance(Eigen::Quaterniond::Identity()) == 0.0;
    if (!identity || !f0.translation.isZero())
        throw ConfigError("keyframes: the frame at t = 0 must be the identity");
}

RigidTransform keyframeTransform(const KeyframeMotion& m, double t)
{
    auto hi = std::upper_bound(m.frames.begin(), m.frames.end(), t,
                               [](double v, const Keyframe& f) { return v < f.t; });
    if (hi == m.frames.end())
        hi = std::prev(m.frames.end());
    const Keyframe& b = *hi;
    const Keyframe& a = *std::prev(hi);
    const double s = (t - a.t) / (b.t - a.t);

    RigidTransform r;
    r.translation = (1.0 - s) * a.translation + s * b.translation;
    if (m.dim == 2)
        r.rotation = Eigen::AngleAxisd((1.0 - s) * a.angle + s * b.angle, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    else
        r.rotation = a.orientation.slerp(s, b.orientation).toRotationMatrix();
    return r;
}

} // namespace

Trajectory::Trajectory(Kind kind) : kind_(std::move(kind))
{
    if (const auto* k = std::get_if<KeyframeMotion>(&kind_))
        validateKeyframes(*k);
    if (const auto* f = std::get_if<FollowerMotion>(&kind_))
        if (!(f->length > 0.0))
            throw ConfigError("follower trajectory: length must be positive");
    if (const auto* r = std::get_if<RotationMotion>(&kind_))
        if (r->axis.norm() == 0.0)
            throw ConfigError("rotation trajectory: axis must be nonzero");
}

Trajectory Trajectory::rotation(const Point& pivot, double angleStart, double angleEnd, const Eigen::Vector3d& axis)
{
    return Trajectory(RotationMotion{pivot, axis, angleStart, angleEnd});
}

Trajectory Trajectory::keyframes(KeyframeMotion motion)
{
    return Trajectory(std::move(motion));
}

RigidTransform Trajectory::at(double t) const
{
    checkTime(t);
    struct Visitor {
        double t;
        RigidTransform operator()(const StaticMotion&) const { return RigidTransform::identity(); }
        RigidTransform operator()(const RotationMotion& m) const
        {
            if (t == 0.0)
                return RigidTransform::identity();
            return RigidTransform::rotationAbout(m.axis, t * (m.angleEnd - m.angleStart), m.pivot);
        }
        RigidTransform operator()(const FollowerMotion& m) const
        {
            const double theta = m.angleStart + t * (m.angleEnd - m.angleStart);
            const double dy = followerHeight(m.length, theta) - followerHeight(m.length, m.angleStart);
            return RigidTransform::fromTranslation(Eigen::Vector3d(0.0, dy, 0.0));
        }
        RigidTransform operator()(const KeyframeMotion& m) const { return keyframeTransform(m, t); }
    };
    return std::visit(Visitor{t}, kind_);
}

double followerHeight(double length, double theta)
{
    return 0.75 * length + 0.125 * length * std::cos(2.0 * theta);
}

Trajectory followerTrajectory(double length, double angleStart, double angleEnd)
{
    return Trajectory(FollowerMotion{length, angleStart, angleEnd});
}

RigidTransform evaluate(const Trajectory& traj, double t)
{
    return traj.at(t);
}

RigidTransform RelativeTrajectory::at(double t) const
{
    return observer.at(t).inverse() * moving.at(t);
}

RigidTransform relativeAt(const RelativeTrajectory& rel, double t)
{
    return rel.at(t);
}

std::vector<RigidTransform> sampleUniform(const RelativeTrajectory& rel, int steps)
{
    if (steps < 1)
        throw ConfigError("sampleUniform: step count must be at least 1");
    std::vector<RigidTransform> out;
    out.reserve(static_cast<std::size_t>(steps));
    const double dt = 1.0 / steps;
    for (int k = 0; k < steps; ++k)
        out.push_back(rel.at(k * dt));
    return out;
}

} // namespace codesign
