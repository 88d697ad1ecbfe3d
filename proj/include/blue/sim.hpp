#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "blue/control.hpp"
#include "blue/kinematics.hpp"
#include "blue/model.hpp"

namespace blue {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Classical four-stage Runge-Kutta step for x' = f(t, x).
template <class State, class Deriv>
State rk4_step(const Deriv& f, double t, const State& x, double dt) {
  const State k1 = f(t, x);
  const State k2 = f(t + 0.5 * dt, State(x + (0.5 * dt) * k1));
  const State k3 = f(t + 0.5 * dt, State(x + (0.5 * dt) * k2));
  const State k4 = f(t + dt, State(x + dt * k3));
  return State(x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

/// Motor torque at the joints as a function of the current state.
using TorqueFn = std::function<Vector6(const JointState&)>;

/// One RK4 step of D qdd + C qd + G = tau - beta qd. Throws NumericalError
/// (naming the time) if the new state is not finite.
JointState rk4_step(const RobotModel& m, const JointState& s, const TorqueFn& tau_fn, double dt);

enum class Integrator { rk4, semi_implicit_euler };
enum class ScenarioKind { zero_input, tracking, sweep };

struct ControllerConfig {
  Gains gains{};
  ReferenceTrajectory reference = ReferenceTrajectory::hold(Vector6::Zero());
  /// Adds beta * qd so the joint damping is cancelled along with D, C and G.
  bool compensate_damping = true;
  /// Plant masses and inertias are this multiple of the controller's model.
  double plant_mass_scale = 1.0;
};

/// Linear torsional spring between each motor output and its link, with the
/// motor-side rotor inertia reflected to the joint.
struct SeriesElasticConfig {
  bool enabled = false;
  double stiffness = 200.0;      // N m/rad
  double motor_inertia = 1e-3;   // kg m^2, joint side
};

struct SweepConfig {
  std::vector<int> joints{0, 1, 4};
  double from_deg = 0.0;
  double to_deg = 15.0;
  int steps = 16;
};

struct SimConfig {
  double dt = 1e-3;
  double t_end = 5.0;
  Integrator integrator = Integrator::rk4;
  ScenarioKind scenario = ScenarioKind::zero_input;
  JointState initial{};
  std::optional<ControllerConfig> controller;
  bool electrical = false;
  double stall_current = std::numeric_limits<double>::infinity();  // A
  SeriesElasticConfig series_elastic{};
  SweepConfig sweep{};
  std::uint64_t seed = 0;
  std::string output;
};

/// Throws ConfigError describing the first problem.
void validate_config(const SimConfig& cfg);

SimConfig parse_sim_config(const std::string& text);
SimConfig load_sim_config(const std::filesystem::path& path);

struct TrajectoryRow {
  double t = 0.0;
  Vector6 q = Vector6::Zero();
  Vector6 qd = Vector6::Zero();
  Vector6 tau = Vector6::Zero();
  double T = 0.0;
  double V = 0.0;
  double E = 0.0;
  Vector6 e = Vector6::Zero();  // only meaningful when tracking
};

struct Trajectory {
  bool tracking = false;
  std::vector<TrajectoryRow> rows;
};

using ScenarioOutput = std::variant<Trajectory, SweepTable>;

/// floor(t_end / dt) + 1, robust to t_end being an exact multiple of dt.
std::size_t trajectory_row_count(double dt, double t_end);

/// Runs one scenario. Throws ConfigError for a bad config and NumericalError on divergence.
ScenarioOutput run_scenario(const SimConfig& cfg, const RobotModel& m);

std::string trajectory_csv(const Trajectory& tr);
void write_csv(const Trajectory& tr, const std::filesystem::path& path);
Trajectory read_csv(const std::filesystem::path& path);

std::string sweep_csv(const SweepTable& table);
void write_sweep_csv(const SweepTable& table, const std::filesystem::path& path);

/// Run metadata (seed, scenario, step) as JSON text.
std::string run_metadata(const SimConfig& cfg, const RobotModel& m, std::size_t rows);

}  // namespace blue
