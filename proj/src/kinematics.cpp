#include "blue/kinematics.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace blue {

Pose dh_transform(const DHRow& row, double theta) {
  const double th = theta + row.theta_offset;
  const double ct = std::cos(th), st = std::sin(th);
  const double ca = std::cos(row.alpha_prev), sa = std::sin(row.alpha_prev);
  Pose pose;
  // clang-format off
  pose.matrix << ct,      -st,      0.0,  row.a_prev,
                 st * ca,  ct * ca, -sa,  -sa * row.d,
                 st * sa,  ct * sa,  ca,   ca * row.d,
                 0.0,      0.0,      0.0,  1.0;
  // clang-format on
  return pose;
}

Pose base_transform(const RobotModel& m) {
  Pose base;
  base.matrix.topLeftCorner<3, 3>() = m.base_frame.rotation;
  base.matrix.topRightCorner<3, 1>() = m.base_frame.translation;
  if (m.stance_row) base = base * dh_transform(*m.stance_row, m.stance_angle);
  return base;
}

ChainPoses chain_transforms(const RobotModel& m, const Vector6& q) {
  ChainPoses poses;
  Pose current = base_transform(m);
  for (int i = 0; i < kNumJoints; ++i) {
    current = current * dh_transform(m.dh_table[i], q(i));
    poses[i] = current;
  }
  return poses;
}

const Jacobian3& angular_velocity_map(int body) {
  static const std::array<Jacobian3, kNumJoints> maps = [] {
    std::array<Jacobian3, kNumJoints> j;
    for (auto& m : j) m.setZero();
    // x: knee and hip flexion chain, y: hip abductions.
    j[0](0, 0) = 1;
    j[1](0, 0) = j[1](0, 1) = 1;
    j[2](0, 0) = j[2](0, 1) = 1;
    j[2](1, 2) = 1;
    j[3](0, 0) = j[3](0, 1) = 1;
    j[3](1, 2) = j[3](1, 3) = 1;
    j[4](0, 0) = j[4](0, 1) = j[4](0, 4) = 1;
    j[4](1, 2) = j[4](1, 3) = 1;
    j[5](0, 0) = j[5](0, 1) = j[5](0, 4) = j[5](0, 5) = 1;
    j[5](1, 2) = j[5](1, 3) = 1;
    return j;
  }();
  return maps.at(static_cast<std::size_t>(body));
}

ComJacobians com_jacobians(const RobotModel& m, const Vector6& q) {
  ComJacobians out;
  out.frames = chain_transforms(m, q);
  for (int i = 0; i < kNumJoints; ++i) {
    const Vector3 r = out.frames[i].apply(m.links[i].com_offset);
    out.com[i] = r;
    Jacobian3& jac = out.linear[i];
    jac.setZero();
    // Joint k rotates about the z axis of frame k through that frame's origin.
    for (int k = 0; k <= i; ++k) {
      jac.col(k) = out.frames[k].z_axis().cross(r - out.frames[k].translation());
    }
  }
  return out;
}

BodyKinematics com_kinematics(const RobotModel& m, const JointState& s) {
  const ComJacobians jac = com_jacobians(m, s.q);
  BodyKinematics out;
  for (int i = 0; i < kNumJoints; ++i) {
    out.r[i] = jac.com[i];
    out.rd[i] = jac.linear[i] * s.qd;
    out.omega[i] = angular_velocity_map(i) * s.qd;
  }
  return out;
}

SweepTable joint_sweep(const RobotModel& m, std::span<const int> joints, double from, double to, int steps) {
  if (joints.empty()) throw std::invalid_argument("joint_sweep: empty joint set");
  if (joints.size() > kNumJoints + 1) throw std::invalid_argument("joint_sweep: too many joints");
  if (steps < 2) throw std::invalid_argument("joint_sweep: steps must be >= 2");
  for (const int j : joints) {
    if (j < 0 || j > kNumJoints) throw std::invalid_argument(fmt::format("joint_sweep: joint index {} out of range", j));
    if (j == 0 && !m.stance_row)
      throw std::invalid_argument("joint_sweep: joint 0 (stance angle) needs a model with a stance row");
  }

  SweepTable table;
  table.joints.assign(joints.begin(), joints.end());
  RobotModel work = m;
  for (int k = 0; k < steps; ++k) {
    const double angle = from + (to - from) * static_cast<double>(k) / static_cast<double>(steps - 1);
    Vector6 q = Vector6::Zero();
    work.stance_angle = m.stance_angle;
    for (const int j : joints) {
      if (j == 0)
        work.stance_angle = angle;
      else
        q(j - 1) = angle;
    }
    const ChainPoses poses = chain_transforms(work, q);
    std::array<Vector3, kNumJoints + 1> origins;
    origins[0] = base_transform(work).translation();
    for (int i = 0; i < kNumJoints; ++i) origins[i + 1] = poses[i].translation();
    table.angles.push_back(angle);
    table.origins.push_back(origins);
  }
  return table;
}

}  // namespace blue
