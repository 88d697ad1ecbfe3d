#include "blue/actuation.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace blue {

bool motor_state_ok(const MotorState& st, double stall_current) {
  return std::isfinite(st.ia) && std::isfinite(st.theta_m) && std::isfinite(st.Va) && std::abs(st.ia) <= stall_current;
}

BeltStage BeltStage::from_teeth(int driver, int driven, const BeltSpec& belt) {
  if (driver <= 0 || driven <= 0) throw std::invalid_argument("pulley tooth counts must be positive");
  BeltStage s;
  s.ratio = static_cast<double>(driver) / static_cast<double>(driven);
  s.pitch_mm = belt.pitch_mm;
  s.teeth_driver = driver;
  s.teeth_driven = driven;
  s.belt = belt;
  return s;
}

double BeltStage::driver_pitch_diameter_mm() const {
  if (!teeth_driver) throw std::logic_error("belt stage has no driver tooth count");
  return *teeth_driver * pitch_mm / std::numbers::pi;
}

double BeltStage::driven_pitch_diameter_mm() const {
  if (!teeth_driven) throw std::logic_error("belt stage has no driven tooth count");
  return *teeth_driven * pitch_mm / std::numbers::pi;
}

double motor_torque(const MotorParams& p, double ia) { return p.Kr * p.k_phi * ia; }

double current_derivative(const MotorParams& p, const MotorState& st, double omega_m) {
  return (st.Va - p.Ra * st.ia - p.k_phi * omega_m) / p.La;
}

TransmissionSpeeds transmission_speeds(const std::array<BeltStage, 2>& stages, double input_rpm) {
  for (const auto& s : stages)
    if (!(s.ratio > 0.0)) throw std::invalid_argument(fmt::format("belt stage ratio must be > 0 (got {})", s.ratio));
  TransmissionSpeeds out;
  out.axle_rpm = stages[0].ratio * input_rpm;
  out.out_rpm = stages[0].ratio * stages[1].ratio * input_rpm;
  return out;
}

double rpm_to_rad_per_s(double rpm) { return rpm * 2.0 * std::numbers::pi / 60.0; }

double torque_at_speed(double power_W, double rpm) {
  if (!(rpm > 0.0)) throw std::domain_error(fmt::format("shaft speed must be > 0 rpm (got {})", rpm));
  return power_W / rpm_to_rad_per_s(rpm);
}

TransmissionTorques transmission_torques(double power_W, double axle_rpm, double out_rpm) {
  return {torque_at_speed(power_W, axle_rpm), torque_at_speed(power_W, out_rpm)};
}

Vector6 generalized_forces(const Vector6& tau_motor, const Vector6& beta, const Vector6& qd) {
  return tau_motor - beta.cwiseProduct(qd);
}

}  // namespace blue
