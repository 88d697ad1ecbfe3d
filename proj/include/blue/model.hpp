#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace blue {

inline constexpr int kNumJoints = 6;

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;
using Vector6 = Eigen::Matrix<double, kNumJoints, 1>;
using Matrix6 = Eigen::Matrix<double, kNumJoints, kNumJoints>;

/// Body names in chain order, right support to left support.
inline constexpr std::array<char, kNumJoints> kBodyNames = {'A', 'B', 'C', 'D', 'E', 'F'};

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LinkParams {
  double mass = 0.0;                  // kg
  Vector3 com_offset = Vector3::Zero();  // m, in the link's DH frame
  Matrix3 inertia = Matrix3::Zero();     // kg m^2, about the CoM

  bool operator==(const LinkParams&) const = default;
};

/// One row of a modified (Craig) Denavit-Hartenberg table.
struct DHRow {
  double a_prev = 0.0;        // m, a_{i-1}
  double alpha_prev = 0.0;    // rad, alpha_{i-1}
  double d = 0.0;             // m, d_i
  double theta_offset = 0.0;  // rad, added to the joint variable

  bool operator==(const DHRow&) const = default;
};

struct MotorParams {
  double Ra = 1.0;           // ohm
  double La = 1e-3;          // H
  double k_phi = 0.01;       // V s/rad == N m/A
  double Kr = 1.0;           // total reduction, output torque multiplier
  double beta = 0.0;         // N m s/rad, viscous damping at the joint
  double rated_power = 1.0;  // W

  bool operator==(const MotorParams&) const = default;
};

struct RigidTransform {
  Matrix3 rotation = Matrix3::Identity();
  Vector3 translation = Vector3::Zero();

  bool operator==(const RigidTransform&) const = default;
};

struct RobotModel {
  std::string name = "BLUE";
  std::string note;
  std::array<LinkParams, kNumJoints> links{};
  std::array<DHRow, kNumJoints> dh_table{};
  std::array<MotorParams, kNumJoints> motors{};
  double gravity = 9.81;  // m/s^2 along world -z
  RigidTransform base_frame{};
  /// Passive stance-support row applied after base_frame; absent means identity.
  std::optional<DHRow> stance_row;
  double stance_angle = 0.0;  // rad

  double total_mass() const;
  Vector6 damping() const;

  bool operator==(const RobotModel&) const = default;
};

struct JointState {
  double t = 0.0;
  Vector6 q = Vector6::Zero();
  Vector6 qd = Vector6::Zero();
};

inline constexpr int kSchemaVersion = 1;

/// Every invariant violation as "<field> <problem> (observed ...)". Empty iff valid.
std::vector<std::string> validate_model(const RobotModel& m);

/// Canonical text form. Deterministic: equal models serialize to equal bytes.
std::string serialize_model(const RobotModel& m);
RobotModel parse_model(const std::string& text);

RobotModel load_model(const std::filesystem::path& path);
void save_model(const RobotModel& m, const std::filesystem::path& path);

/// Copy of `m` with every mass and inertia tensor multiplied by `factor`.
RobotModel scale_mass(const RobotModel& m, double factor);

}  // namespace blue
