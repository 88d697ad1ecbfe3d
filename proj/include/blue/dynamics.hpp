#pragma once

#include <array>
#include <stdexcept>

#include "blue/model.hpp"

namespace blue {

/// Raised when the mass matrix cannot be factored or a state stops being finite.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Terms of D(q) qdd + C(q, qd) qd + G(q) = tau.
struct DynamicsMatrices {
  Matrix6 D = Matrix6::Zero();
  Matrix6 C = Matrix6::Zero();
  Vector6 G = Vector6::Zero();
};

struct EnergyReport {
  double T = 0.0;  // kinetic, J
  double V = 0.0;  // potential, J
  double L = 0.0;  // T - V

  double total() const { return T + V; }
};

EnergyReport energies(const RobotModel& m, const JointState& s);

/// Assembled from sum_i (m_i Jv_i^T Jv_i + Jw_i^T I_i Jw_i); qd^T D qd == 2 T.
Matrix6 mass_matrix(const RobotModel& m, const Vector6& q);

/// dD/dq_k for k = 0..5, differentiated in closed form.
std::array<Matrix6, kNumJoints> mass_matrix_partials(const RobotModel& m, const Vector6& q);

/// Christoffel-symbol Coriolis matrix built from mass_matrix_partials.
Matrix6 coriolis_matrix(const RobotModel& m, const Vector6& q, const Vector6& qd);

/// dV/dq from the z rows of the CoM Jacobians.
Vector6 gravity_vector(const RobotModel& m, const Vector6& q);

DynamicsMatrices dynamics_matrices(const RobotModel& m, const Vector6& q, const Vector6& qd);

Vector6 inverse_dynamics(const RobotModel& m, const Vector6& q, const Vector6& qd, const Vector6& qdd);

/// Solves D qdd = tau - C qd - G by Cholesky. Throws NumericalError if D is not
/// positive definite.
Vector6 forward_dynamics(const RobotModel& m, const JointState& s, const Vector6& tau);

/// Same solve, reusing matrices that are already assembled.
Vector6 solve_acceleration(const DynamicsMatrices& dm, const Vector6& qd, const Vector6& tau);

}  // namespace blue
