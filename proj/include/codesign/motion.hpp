#pragma once

#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "codesign/grid.hpp"

namespace codesign {

/// Proper rigid motion x -> R x + t. 2D motions rotate about the z axis.
struct RigidTransform {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    static RigidTransform identity() { return {}; }
    static RigidTransform fromTranslation(const Eigen::Vector3d& t);
    /// Rotation by `angle` about `axis` through `pivot`; the pivot is a fixed point.
    static RigidTransform rotationAbout(const Eigen::Vector3d& axis, double angle, const Point& pivot);
    static RigidTransform rotation2d(double angle, const Point& pivot = Point::Zero())
    {
        return rotationAbout(Eigen::Vector3d::UnitZ(), angle, pivot);
    }

    Point apply(const Point& p) const { return rotation * p + translation; }
    RigidTransform inverse() const;
    /// Composition: (a * b).apply(x) == a.apply(b.apply(x)).
    RigidTransform operator*(const RigidTransform& rhs) const;

    bool isApprox(const RigidTransform& other, double tol = 1e-12) const;
    /// Max deviation of R^T R from I and of det R from 1.
    double orthonormalityError() const;
};

/// Rotation about a fixed pivot with the angle linear in t. The transform at time
/// t rotates by (angleStart + t (angleEnd - angleStart)) - angleStart, so t = 0 is
/// the identity; angleStart is the part's orientation as drawn in its grid.
struct RotationMotion {
    Point pivot = Point::Zero();
    Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
    double angleStart = 0.0;
    double angleEnd = 0.0;
    bool operator==(const RotationMotion&) const = default;
};

/// Vertical translation following y(theta) = 3L/4 + L/8 cos(2 theta), theta linear in t,
/// measured relative to y(angleStart).
struct FollowerMotion {
    double length = 1.0;
    double angleStart = 0.0;
    double angleEnd = 0.0;
    bool operator==(const FollowerMotion&) const = default;
};

struct Keyframe {
    double t = 0.0;
    /// 2D keyframes interpolate this angle linearly (about z).
    double angle = 0.0;
    /// 3D keyframes interpolate this orientation along the geodesic.
    Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    bool operator==(const Keyframe& o) const
    {
        return t == o.t && angle == o.angle && orientation.coeffs() == o.orientation.coeffs() &&
               translation == o.translation;
    }
};

struct KeyframeMotion {
    int dim = 2;
    std::vector<Keyframe> frames;
    bool operator==(const KeyframeMotion&) const = default;
};

struct StaticMotion {
    bool operator==(const StaticMotion&) const = default;
};

/// Time-parameterized rigid motion over t in [0, 1] with an identity transform at t = 0.
class Trajectory {
public:
    using Kind = std::variant<StaticMotion, RotationMotion, FollowerMotion, KeyframeMotion>;

    Trajectory() = default;
    explicit Trajectory(Kind kind);

    static Trajectory stationary() { return Trajectory{}; }
    static Trajectory rotation(const Point& pivot, double angleStart, double angleEnd,
                               const Eigen::Vector3d& axis = Eigen::Vector3d::UnitZ());
    static Trajectory keyframes(KeyframeMotion motion);

    /// Throws ConfigError when t is outside [0, 1].
    RigidTransform at(double t) const;

    const Kind& kind() const { return kind_; }
    bool operator==(const Trajectory&) const = default;

private:
    Kind kind_{StaticMotion{}};
};

/// Height of the follower center for cam angle theta.
double followerHeight(double length, double theta);

/// Follower translation driven by a cam whose angle runs linearly over [angleStart, angleEnd].
Trajectory followerTrajectory(double length, double angleStart, double angleEnd);

RigidTransform evaluate(const Trajectory& traj, double t);

/// Motion of `moving` seen from a frame attached to `observer`: observer(t)^-1 * moving(t).
struct RelativeTrajectory {
    Trajectory observer;
    Trajectory moving;

    RigidTransform at(double t) const;
    RelativeTrajectory inverted() const { return {moving, observer}; }
};

RigidTransform relativeAt(const RelativeTrajectory& rel, double t);

/// Left-endpoint samples t_k = (k-1)/K, k = 1..K.
std::vector<RigidTransform> sampleUniform(const RelativeTrajectory& rel, int steps);

} // namespace codesign
