#pragma once

#include <stdexcept>
#include <vector>

#include "blue/model.hpp"

namespace blue {

struct ControlError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// PD gains of the imposed error dynamics e'' + kd e' + kp e = 0, per joint.
struct Gains {
  Vector6 kp = Vector6::Constant(320.0);  // 1/s^2
  Vector6 kd = Vector6::Constant(48.0);   // 1/s

  static Gains uniform(double kp, double kd);
};

/// Gains placing both closed-loop poles at s = -p1 and s = -p2.
Gains gains_from_poles(double p1, double p2);

/// Desired position, velocity and acceleration at one instant.
struct Reference {
  Vector6 qd = Vector6::Zero();
  Vector6 qd_dot = Vector6::Zero();
  Vector6 qd_ddot = Vector6::Zero();
};

struct SplineKnot {
  double t = 0.0;
  Vector6 q = Vector6::Zero();
};

/// Analytic reference generator. Derivatives are exact derivatives of the
/// position profile, never differenced.
class ReferenceTrajectory {
 public:
  enum class Kind { hold, sinusoid, spline };

  static ReferenceTrajectory hold(const Vector6& q);
  /// offset + amplitude * sin(frequency * t + phase), element-wise.
  static ReferenceTrajectory sinusoid(const Vector6& offset, const Vector6& amplitude, const Vector6& frequency,
                                      const Vector6& phase);
  /// Cubic spline with zero end velocities; holds the end knots outside the
  /// knot range. Throws ControlError for fewer than two knots or
  /// non-increasing times.
  static ReferenceTrajectory spline(std::vector<SplineKnot> knots);

  Reference at(double t) const;
  Kind kind() const { return kind_; }

  const Vector6& offset() const { return offset_; }
  const Vector6& amplitude() const { return amplitude_; }
  const Vector6& frequency() const { return frequency_; }
  const Vector6& phase() const { return phase_; }
  const std::vector<SplineKnot>& knots() const { return knots_; }

 private:
  ReferenceTrajectory() = default;

  Kind kind_ = Kind::hold;
  Vector6 offset_ = Vector6::Zero();
  Vector6 amplitude_ = Vector6::Zero();
  Vector6 frequency_ = Vector6::Zero();
  Vector6 phase_ = Vector6::Zero();
  std::vector<SplineKnot> knots_;
  std::vector<Vector6> second_derivs_;
};

inline Reference reference_trajectory(const ReferenceTrajectory& traj, double t) { return traj.at(t); }

/// e = q - q_d and e' = qd - q_d'.
struct TrackingError {
  Vector6 e = Vector6::Zero();
  Vector6 e_dot = Vector6::Zero();
};

TrackingError tracking_error(const JointState& s, const Reference& ref);

/// mu = q_d'' - kp e - kd e'
Vector6 commanded_acceleration(const JointState& s, const Reference& ref, const Gains& g);

/// Computed-torque law tau = D(q) mu + C(q, qd) qd + G(q). Throws
/// NumericalError if D(q) is not positive definite.
Vector6 computed_torque(const RobotModel& m, const JointState& s, const Reference& ref, const Gains& g);

}  // namespace blue
