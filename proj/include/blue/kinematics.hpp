#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "blue/model.hpp"

namespace blue {

/// Homogeneous rigid transform, bottom row exactly [0 0 0 1].
struct Pose {
  Eigen::Matrix4d matrix = Eigen::Matrix4d::Identity();

  Matrix3 rotation() const { return matrix.topLeftCorner<3, 3>(); }
  Vector3 translation() const { return matrix.topRightCorner<3, 1>(); }
  Vector3 z_axis() const { return matrix.block<3, 1>(0, 2); }
  Vector3 apply(const Vector3& p) const { return rotation() * p + translation(); }

  Pose operator*(const Pose& rhs) const { return Pose{matrix * rhs.matrix}; }
  bool operator==(const Pose&) const = default;
};

using ChainPoses = std::array<Pose, kNumJoints>;
using Jacobian3 = Eigen::Matrix<double, 3, kNumJoints>;

struct BodyKinematics {
  std::array<Vector3, kNumJoints> r;      // CoM position, m
  std::array<Vector3, kNumJoints> rd;     // CoM velocity, m/s
  std::array<Vector3, kNumJoints> omega;  // angular velocity, rad/s
};

/// CoM positions together with their linear Jacobians (rd_i = linear[i] * qd).
struct ComJacobians {
  ChainPoses frames;
  std::array<Vector3, kNumJoints> com;
  std::array<Jacobian3, kNumJoints> linear;
};

/// Modified DH link transform with joint angle theta + row.theta_offset.
Pose dh_transform(const DHRow& row, double theta);

/// base_frame followed by the passive stance row, if the model has one.
Pose base_transform(const RobotModel& m);

/// World-frame pose of every joint frame 1..6.
ChainPoses chain_transforms(const RobotModel& m, const Vector6& q);

/// Constant map qd -> omega_i for body i. Each body's angular velocity is the
/// axis-aligned sum of the joint rates upstream of it: knee and hip-flexion
/// rates accumulate on x, the two hip abductions on y.
const Jacobian3& angular_velocity_map(int body);

ComJacobians com_jacobians(const RobotModel& m, const Vector6& q);

BodyKinematics com_kinematics(const RobotModel& m, const JointState& s);

/// Index 0 selects the passive stance angle, 1..6 the actuated joints.
struct SweepTable {
  std::vector<int> joints;
  std::vector<double> angles;                      // rad, one per row
  std::vector<std::array<Vector3, kNumJoints + 1>> origins;  // base frame then frames 1..6
};

/// Sets every selected joint to the same angle, stepping linearly from `from`
/// to `to` (inclusive) over `steps` rows; all other joints stay at zero.
SweepTable joint_sweep(const RobotModel& m, std::span<const int> joints, double from, double to, int steps);

}  // namespace blue
