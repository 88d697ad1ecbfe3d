#include "blue/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Cholesky>

#include "blue/kinematics.hpp"

namespace blue {

namespace {

Matrix6 rotational_mass_matrix(const RobotModel& m) {
  Matrix6 d = Matrix6::Zero();
  for (int i = 0; i < kNumJoints; ++i) {
    const Jacobian3& jw = angular_velocity_map(i);
    d.noalias() += jw.transpose() * m.links[i].inertia * jw;
  }
  return d;
}

Matrix6 mass_matrix_from(const RobotModel& m, const ComJacobians& jac) {
  Matrix6 d = rotational_mass_matrix(m);
  for (int i = 0; i < kNumJoints; ++i) d.noalias() += m.links[i].mass * jac.linear[i].transpose() * jac.linear[i];
  return 0.5 * (d + d.transpose());
}

Vector6 gravity_from(const RobotModel& m, const ComJacobians& jac) {
  Vector6 g = Vector6::Zero();
  for (int i = 0; i < kNumJoints; ++i) g.noalias() += (m.links[i].mass * m.gravity) * jac.linear[i].row(2).transpose();
  return g;
}

}  // namespace

EnergyReport energies(const RobotModel& m, const JointState& s) {
  const BodyKinematics kin = com_kinematics(m, s);
  EnergyReport e;
  for (int i = 0; i < kNumJoints; ++i) {
    const LinkParams& link = m.links[i];
    e.T += 0.5 * link.mass * kin.rd[i].squaredNorm() + 0.5 * kin.omega[i].dot(link.inertia * kin.omega[i]);
    e.V += link.mass * m.gravity * kin.r[i].z();
  }
  e.L = e.T - e.V;
  return e;
}

Matrix6 mass_matrix(const RobotModel& m, const Vector6& q) { return mass_matrix_from(m, com_jacobians(m, q)); }

namespace {

std::array<Matrix6, kNumJoints> partials_from(const RobotModel& m, const ComJacobians& jac) {
  std::array<Matrix6, kNumJoints> dD;
  for (int j = 0; j < kNumJoints; ++j) {
    const Vector3 zj = jac.frames[j].z_axis();
    Matrix6 acc = Matrix6::Zero();
    // Bodies upstream of joint j do not move with it.
    for (int i = j; i < kNumJoints; ++i) {
      const Jacobian3& J = jac.linear[i];
      Jacobian3 dJ = Jacobian3::Zero();
      // Columns k >= j turn rigidly with joint j; columns k < j see only the CoM move.
      for (int k = 0; k < j; ++k) dJ.col(k) = jac.frames[k].z_axis().cross(J.col(j));
      for (int k = j; k <= i; ++k) dJ.col(k) = zj.cross(J.col(k));
      const Matrix6 t = J.transpose() * dJ;
      acc.noalias() += m.links[i].mass * (t + t.transpose());
    }
    dD[j] = 0.5 * (acc + acc.transpose());
  }
  return dD;
}

Matrix6 coriolis_from(const std::array<Matrix6, kNumJoints>& dD, const Vector6& qd) {
  Matrix6 d_dot = Matrix6::Zero();
  for (int k = 0; k < kNumJoints; ++k) d_dot += dD[k] * qd(k);

  // Column i of P holds dD[i] * qd.
  Matrix6 p;
  for (int i = 0; i < kNumJoints; ++i) p.col(i) = dD[i] * qd;

  // C_ij = 1/2 (Ddot_ij + (dD_j qd)_i - (dD_i qd)_j)
  return 0.5 * (d_dot + p - p.transpose());
}

}  // namespace

std::array<Matrix6, kNumJoints> mass_matrix_partials(const RobotModel& m, const Vector6& q) {
  return partials_from(m, com_jacobians(m, q));
}

Matrix6 coriolis_matrix(const RobotModel& m, const Vector6& q, const Vector6& qd) {
  // Only the translational part of D depends on q.
  return coriolis_from(partials_from(m, com_jacobians(m, q)), qd);
}

Vector6 gravity_vector(const RobotModel& m, const Vector6& q) { return gravity_from(m, com_jacobians(m, q)); }

DynamicsMatrices dynamics_matrices(const RobotModel& m, const Vector6& q, const Vector6& qd) {
  const ComJacobians jac = com_jacobians(m, q);
  DynamicsMatrices dm;
  dm.D = mass_matrix_from(m, jac);
  dm.C = coriolis_from(partials_from(m, jac), qd);
  dm.G = gravity_from(m, jac);
  return dm;
}

Vector6 inverse_dynamics(const RobotModel& m, const Vector6& q, const Vector6& qd, const Vector6& qdd) {
  const DynamicsMatrices dm = dynamics_matrices(m, q, qd);
  return dm.D * qdd + dm.C * qd + dm.G;
}

Vector6 solve_acceleration(const DynamicsMatrices& dm, const Vector6& qd, const Vector6& tau) {
  const Eigen::LLT<Matrix6> llt(dm.D);
  if (llt.info() != Eigen::Success)
    throw NumericalError("mass matrix is not positive definite (degenerate model, e.g. a massless distal chain)");
  const Vector6 rhs = tau - dm.C * qd - dm.G;
  Vector6 qdd = llt.solve(rhs);
  // One step of iterative refinement.
  qdd += llt.solve(rhs - dm.D * qdd);
  return qdd;
}

Vector6 forward_dynamics(const RobotModel& m, const JointState& s, const Vector6& tau) {
  return solve_acceleration(dynamics_matrices(m, s.q, s.qd), s.qd, tau);
}

}  // namespace blue
