#include "blue/control.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <fmt/format.h>

#include "blue/dynamics.hpp"

namespace blue {

Gains Gains::uniform(double kp, double kd) { return {Vector6::Constant(kp), Vector6::Constant(kd)}; }

Gains gains_from_poles(double p1, double p2) {
  if (!(p1 > 0.0) || !(p2 > 0.0) || !std::isfinite(p1) || !std::isfinite(p2))
    throw ControlError(fmt::format("pole magnitudes must be positive (got {}, {})", p1, p2));
  // (s + p1)(s + p2) = s^2 + (p1 + p2) s + p1 p2
  return Gains::uniform(p1 * p2, p1 + p2);
}

ReferenceTrajectory ReferenceTrajectory::hold(const Vector6& q) {
  ReferenceTrajectory r;
  r.kind_ = Kind::hold;
  r.offset_ = q;
  return r;
}

ReferenceTrajectory ReferenceTrajectory::sinusoid(const Vector6& offset, const Vector6& amplitude,
                                                  const Vector6& frequency, const Vector6& phase) {
  if (!offset.allFinite() || !amplitude.allFinite() || !frequency.allFinite() || !phase.allFinite())
    throw ControlError("sinusoid parameters must be finite");
  ReferenceTrajectory r;
  r.kind_ = Kind::sinusoid;
  r.offset_ = offset;
  r.amplitude_ = amplitude;
  r.frequency_ = frequency;
  r.phase_ = phase;
  return r;
}

ReferenceTrajectory ReferenceTrajectory::spline(std::vector<SplineKnot> knots) {
  const std::size_t n = knots.size();
  if (n < 2) throw ControlError("spline needs at least two knots");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(knots[i].t) || !knots[i].q.allFinite())
      throw ControlError(fmt::format("spline knot {} is not finite", i));
    if (i > 0 && !(knots[i].t > knots[i - 1].t))
      throw ControlError(fmt::format("spline knot times must be strictly increasing (knot {})", i));
  }

  // Clamped (zero end slope) cubic spline: tridiagonal system in the knot
  // second derivatives, solved per joint with the Thomas algorithm.
  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = knots[i + 1].t - knots[i].t;

  std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0);
  diag[0] = 2.0 * h[0];
  upper[0] = h[0];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    lower[i] = h[i - 1];
    diag[i] = 2.0 * (h[i - 1] + h[i]);
    upper[i] = h[i];
  }
  lower[n - 1] = h[n - 2];
  diag[n - 1] = 2.0 * h[n - 2];

  std::vector<Vector6> rhs(n);
  const auto slope = [&](std::size_t i) -> Vector6 { return (knots[i + 1].q - knots[i].q) / h[i]; };
  rhs[0] = 6.0 * slope(0);
  for (std::size_t i = 1; i + 1 < n; ++i) rhs[i] = 6.0 * (slope(i) - slope(i - 1));
  rhs[n - 1] = -6.0 * slope(n - 2);

  std::vector<double> c(n);
  std::vector<Vector6> d(n);
  c[0] = upper[0] / diag[0];
  d[0] = rhs[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double denom = diag[i] - lower[i] * c[i - 1];
    c[i] = upper[i] / denom;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom;
  }
  std::vector<Vector6> m(n);
  m[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) m[i] = d[i] - c[i] * m[i + 1];

  ReferenceTrajectory r;
  r.kind_ = Kind::spline;
  r.knots_ = std::move(knots);
  r.second_derivs_ = std::move(m);
  return r;
}

Reference ReferenceTrajectory::at(double t) const {
  Reference ref;
  switch (kind_) {
    case Kind::hold:
      ref.qd = offset_;
      break;
    case Kind::sinusoid: {
      const Vector6 arg = (frequency_ * t + phase_).eval();
      const Vector6 s = arg.array().sin().matrix();
      const Vector6 c = arg.array().cos().matrix();
      ref.qd = offset_ + amplitude_.cwiseProduct(s);
      ref.qd_dot = amplitude_.cwiseProduct(frequency_).cwiseProduct(c);
      ref.qd_ddot = -amplitude_.cwiseProduct(frequency_.cwiseProduct(frequency_)).cwiseProduct(s);
      break;
    }
    case Kind::spline: {
      if (t <= knots_.front().t) {
        ref.qd = knots_.front().q;
        break;
      }
      if (t >= knots_.back().t) {
        ref.qd = knots_.back().q;
        break;
      }
      std::size_t i = 0;
      while (knots_[i + 1].t < t) ++i;
      const double h = knots_[i + 1].t - knots_[i].t;
      const double a = (knots_[i + 1].t - t) / h;
      const double b = (t - knots_[i].t) / h;
      const Vector6& y0 = knots_[i].q;
      const Vector6& y1 = knots_[i + 1].q;
      const Vector6& m0 = second_derivs_[i];
      const Vector6& m1 = second_derivs_[i + 1];
      ref.qd = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * (h * h / 6.0);
      ref.qd_dot = (y1 - y0) / h - (3.0 * a * a - 1.0) / 6.0 * h * m0 + (3.0 * b * b - 1.0) / 6.0 * h * m1;
      ref.qd_ddot = a * m0 + b * m1;
      break;
    }
  }
  return ref;
}

TrackingError tracking_error(const JointState& s, const Reference& ref) { return {s.q - ref.qd, s.qd - ref.qd_dot}; }

Vector6 commanded_acceleration(const JointState& s, const Reference& ref, const Gains& g) {
  const TrackingError err = tracking_error(s, ref);
  return ref.qd_ddot - g.kp.cwiseProduct(err.e) - g.kd.cwiseProduct(err.e_dot);
}

Vector6 computed_torque(const RobotModel& m, const JointState& s, const Reference& ref, const Gains& g) {
  const DynamicsMatrices dm = dynamics_matrices(m, s.q, s.qd);
  if (Eigen::LLT<Matrix6>(dm.D).info() != Eigen::Success)
    throw NumericalError("computed torque: mass matrix is not positive definite");
  return dm.D * commanded_acceleration(s, ref, g) + dm.C * s.qd + dm.G;
}

}  // namespace blue
