#pragma once

#include <array>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "blue/model.hpp"

namespace blue {

struct MotorState {
  double ia = 0.0;       // A
  double theta_m = 0.0;  // rad, motor shaft
  double Va = 0.0;       // V
};

/// True when every field is finite and |ia| <= stall_current.
bool motor_state_ok(const MotorState& st, double stall_current = std::numeric_limits<double>::infinity());

/// Catalogue data for a timing belt.
struct BeltSpec {
  std::string description;
  double pitch_length_mm = 0.0;
  int teeth = 0;
  double pitch_mm = 0.0;
  double height_mm = 0.0;
};

/// The two XL belts used in each actuator.
inline const BeltSpec kBelt70XL{"70XL", 177.80, 35, 5.08, 2.3};
inline const BeltSpec kBelt116XL{"116XL", 294.64, 58, 5.08, 2.3};

struct BeltStage {
  double ratio = 1.0;  // output/input speed = Dp_driver / Dp_driven
  double pitch_mm = 5.08;
  std::optional<int> teeth_driver;
  std::optional<int> teeth_driven;
  BeltSpec belt{};

  /// Builds a stage from pulley tooth counts; ratio = driver / driven.
  static BeltStage from_teeth(int driver, int driven, const BeltSpec& belt);

  double driver_pitch_diameter_mm() const;
  double driven_pitch_diameter_mm() const;
};

/// Stage ratios of the actuator's two-stage reduction, inferred from its speed table.
inline constexpr double kStage1Ratio = 0.75;
inline constexpr double kStage2Ratio = 0.525;

double motor_torque(const MotorParams& p, double ia);

/// d(ia)/dt = (Va - Ra ia - k_phi omega_m) / La
double current_derivative(const MotorParams& p, const MotorState& st, double omega_m);

struct TransmissionSpeeds {
  double axle_rpm = 0.0;
  double out_rpm = 0.0;
};

struct TransmissionTorques {
  double axle_Nm = 0.0;
  double out_Nm = 0.0;
};

TransmissionSpeeds transmission_speeds(const std::array<BeltStage, 2>& stages, double input_rpm);

/// Throws std::domain_error for non-positive speeds.
TransmissionTorques transmission_torques(double power_W, double axle_rpm, double out_rpm);

/// Torque carried at a shaft turning at `rpm` under constant power.
double torque_at_speed(double power_W, double rpm);

double rpm_to_rad_per_s(double rpm);

/// Q_i = tau_i - beta_i qd_i
Vector6 generalized_forces(const Vector6& tau_motor, const Vector6& beta, const Vector6& qd);

}  // namespace blue
