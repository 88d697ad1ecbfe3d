#pragma once

// Test-only generators and oracles. Nothing here calls into the code paths it
// is used to check, except where noted.

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "blue/model.hpp"

namespace blue::oracle {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vector6 random_vec6(std::mt19937_64& rng, double lo, double hi) {
  Vector6 v;
  for (int i = 0; i < kNumJoints; ++i) v(i) = uniform(rng, lo, hi);
  return v;
}

inline Matrix3 random_rotation(std::mt19937_64& rng) {
  Eigen::Quaterniond q(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
  q.normalize();
  return q.toRotationMatrix();
}

/// Principal moments in [0.01, 0.02] always satisfy the triangle inequalities.
inline Matrix3 random_inertia(std::mt19937_64& rng, double scale = 1.0) {
  const Matrix3 r = random_rotation(rng);
  const Vector3 p(uniform(rng, 0.01, 0.02), uniform(rng, 0.01, 0.02), uniform(rng, 0.01, 0.02));
  Matrix3 inertia = scale * r * p.asDiagonal() * r.transpose();
  return 0.5 * (inertia + inertia.transpose());
}

inline DHRow random_dh(std::mt19937_64& rng) {
  DHRow row;
  row.a_prev = uniform(rng, 0.0, 0.3);
  row.alpha_prev = uniform(rng, -3.1, 3.1);
  row.d = uniform(rng, -0.1, 0.1);
  row.theta_offset = uniform(rng, -3.1, 3.1);
  return row;
}

inline RobotModel random_model(std::mt19937_64& rng) {
  RobotModel m;
  m.name = "random";
  for (auto& link : m.links) {
    link.mass = uniform(rng, 0.2, 2.0);
    link.com_offset = Vector3(uniform(rng, -0.15, 0.15), uniform(rng, -0.15, 0.15), uniform(rng, -0.15, 0.15));
    link.inertia = random_inertia(rng);
  }
  for (auto& row : m.dh_table) row = random_dh(rng);
  for (auto& p : m.motors) {
    p.Ra = uniform(rng, 0.5, 5.0);
    p.La = uniform(rng, 1e-4, 1e-2);
    p.k_phi = uniform(rng, 0.005, 0.1);
    p.Kr = uniform(rng, 1.0, 200.0);
    p.beta = uniform(rng, 0.0, 0.2);
    p.rated_power = uniform(rng, 1.0, 20.0);
  }
  m.gravity = 9.81;
  m.base_frame.rotation = random_rotation(rng);
  m.base_frame.translation = Vector3(uniform(rng, -0.1, 0.1), uniform(rng, -0.1, 0.1), uniform(rng, -0.1, 0.1));
  if (uniform(rng, 0, 1) < 0.5) {
    m.stance_row = random_dh(rng);
    m.stance_angle = uniform(rng, -0.5, 0.5);
  }
  return m;
}

/// Rotation taking world +z onto the joint-1 x axis and world +x onto the
/// joint-1 axis, so joint 1 swings in the vertical y-z plane.
inline Matrix3 upright_base() {
  Matrix3 r;
  r << 0, 1, 0,  //
      0, 0, 1,   //
      1, 0, 0;
  return r;
}

/// Single physical pendulum on joint 1: only body A has mass, its CoM at
/// distance lc along the link x axis (straight up at q1 = 0). Bodies B..F
/// carry rotational inertia `distal_inertia` (isotropic) and no mass.
inline RobotModel pendulum_model(double mass, double lc, double ixx, double distal_inertia) {
  RobotModel m;
  m.name = "pendulum";
  m.base_frame.rotation = upright_base();
  m.links[0].mass = mass;
  m.links[0].com_offset = Vector3(lc, 0, 0);
  m.links[0].inertia = Vector3(ixx, ixx, ixx).asDiagonal();
  for (int i = 1; i < kNumJoints; ++i) {
    m.links[i].mass = 0.0;
    m.links[i].inertia = Matrix3::Identity() * distal_inertia;
  }
  for (int i = 1; i < kNumJoints; ++i) m.dh_table[i].a_prev = 0.1;
  m.gravity = 9.81;
  return m;
}

/// Modified DH link transform built from its four elementary factors,
/// RotX(alpha) TransX(a) RotZ(theta) TransZ(d), independent of the closed form.
inline Eigen::Matrix4d elementary_dh(const DHRow& row, double theta) {
  Eigen::Affine3d t = Eigen::Affine3d::Identity();
  t.rotate(Eigen::AngleAxisd(row.alpha_prev, Vector3::UnitX()));
  t.translate(Vector3(row.a_prev, 0, 0));
  t.rotate(Eigen::AngleAxisd(theta + row.theta_offset, Vector3::UnitZ()));
  t.translate(Vector3(0, 0, row.d));
  return t.matrix();
}

/// Naive product of the six elementary link transforms.
inline std::array<Eigen::Matrix4d, kNumJoints> brute_force_chain(const RobotModel& m, const Vector6& q) {
  Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
  t.topLeftCorner<3, 3>() = m.base_frame.rotation;
  t.topRightCorner<3, 1>() = m.base_frame.translation;
  if (m.stance_row) t = t * elementary_dh(*m.stance_row, m.stance_angle);
  std::array<Eigen::Matrix4d, kNumJoints> out;
  for (int i = 0; i < kNumJoints; ++i) {
    t = t * elementary_dh(m.dh_table[i], q(i));
    out[i] = t;
  }
  return out;
}

}  // namespace blue::oracle
