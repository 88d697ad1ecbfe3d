#include "blue/sim.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include <Eigen/Core>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "blue/actuation.hpp"
#include "blue/dynamics.hpp"

namespace blue {

namespace {

using Json = nlohmann::json;
using StateVec = Eigen::VectorXd;

constexpr double kDegToRad = std::numbers::pi / 180.0;

const char* scenario_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::zero_input: return "zero_input";
    case ScenarioKind::tracking: return "tracking";
    case ScenarioKind::sweep: return "sweep";
  }
  return "?";
}

const char* integrator_name(Integrator k) {
  return k == Integrator::rk4 ? "rk4" : "semi_implicit_euler";
}

void check_finite(const JointState& s, double t) {
  if (!s.q.allFinite() || !s.qd.allFinite())
    throw NumericalError(fmt::format("state diverged at t = {} s", t));
}

// Closed- or open-loop plant with optional series springs and armature
// circuits. State layout: [positions | velocities | currents], where
// positions are q (and motor angles when series-elastic).
class Plant {
 public:
  Plant(const SimConfig& cfg, const RobotModel& model)
      : cfg_(cfg),
        controller_model_(model),
        plant_model_(cfg.controller ? scale_mass(model, cfg.controller->plant_mass_scale) : model),
        sea_(cfg.series_elastic.enabled),
        electrical_(cfg.electrical),
        npos_(sea_ ? 2 * kNumJoints : kNumJoints) {}

  Eigen::Index size() const { return 2 * npos_ + (electrical_ ? kNumJoints : 0); }
  Eigen::Index npos() const { return npos_; }

  StateVec initial_state() const {
    StateVec x = StateVec::Zero(size());
    x.segment<kNumJoints>(0) = cfg_.initial.q;
    x.segment<kNumJoints>(npos_) = cfg_.initial.qd;
    if (sea_) {
      // Springs start unloaded, motors moving with the links.
      x.segment<kNumJoints>(kNumJoints) = cfg_.initial.q;
      x.segment<kNumJoints>(npos_ + kNumJoints) = cfg_.initial.qd;
    }
    if (electrical_) {
      const Vector6 tau = commanded_torque(cfg_.initial.t, cfg_.initial);
      for (int i = 0; i < kNumJoints; ++i) {
        const MotorParams& p = plant_model_.motors[i];
        x(2 * npos_ + i) = tau(i) / (p.Kr * p.k_phi);
      }
    }
    return x;
  }

  JointState link_state(double t, const StateVec& x) const {
    JointState s;
    s.t = t;
    s.q = x.segment<kNumJoints>(0);
    s.qd = x.segment<kNumJoints>(npos_);
    return s;
  }

  /// Joint-side torque the controller asks the motors for.
  Vector6 commanded_torque(double t, const JointState& s) const {
    if (cfg_.scenario != ScenarioKind::tracking) return Vector6::Zero();
    const ControllerConfig& c = *cfg_.controller;
    Vector6 tau = computed_torque(controller_model_, s, c.reference.at(t), c.gains);
    if (c.compensate_damping) tau += controller_model_.damping().cwiseProduct(s.qd);
    return tau;
  }

  /// Torque delivered by the motor outputs.
  Vector6 motor_output(double t, const StateVec& x, const JointState& s) const {
    if (!electrical_) return commanded_torque(t, s);
    Vector6 tau;
    for (int i = 0; i < kNumJoints; ++i) tau(i) = motor_torque(plant_model_.motors[i], x(2 * npos_ + i));
    return tau;
  }

  /// Torque acting on the links (through the springs when series-elastic).
  Vector6 link_torque(double t, const StateVec& x) const {
    const JointState s = link_state(t, x);
    if (sea_) return cfg_.series_elastic.stiffness * (x.segment<kNumJoints>(kNumJoints) - s.q);
    return motor_output(t, x, s);
  }

  StateVec derivative(double t, const StateVec& x) const {
    const JointState s = link_state(t, x);
    StateVec f(size());
    f.head(npos_) = x.segment(npos_, npos_);

    const Vector6 tau_link = link_torque(t, x);
    const DynamicsMatrices dm = dynamics_matrices(plant_model_, s.q, s.qd);
    // With a spring in the way, the gearmotor's viscous loss acts on the motor side.
    const Vector6 link_beta = sea_ ? Vector6::Zero() : plant_model_.damping();
    f.segment<kNumJoints>(npos_) = solve_acceleration(dm, s.qd, generalized_forces(tau_link, link_beta, s.qd));

    if (sea_ || electrical_) {
      const Vector6 out = motor_output(t, x, s);
      if (sea_) {
        const Vector6 rotor_rate = x.segment<kNumJoints>(npos_ + kNumJoints);
        f.segment<kNumJoints>(npos_ + kNumJoints) =
            (generalized_forces(out, plant_model_.damping(), rotor_rate) - tau_link) / cfg_.series_elastic.motor_inertia;
      }
      if (electrical_) {
        const Vector6 rotor_rate = sea_ ? Vector6(x.segment<kNumJoints>(npos_ + kNumJoints)) : s.qd;
        const Vector6 tau_cmd = commanded_torque(t, s);
        for (int i = 0; i < kNumJoints; ++i) {
          const MotorParams& p = plant_model_.motors[i];
          MotorState ms;
          ms.ia = x(2 * npos_ + i);
          const double omega_m = p.Kr * rotor_rate(i);
          // Zero input means shorted terminals; tracking inverts the
          // steady-state circuit for the commanded torque.
          ms.Va = cfg_.scenario == ScenarioKind::tracking
                      ? p.Ra * tau_cmd(i) / (p.Kr * p.k_phi) + p.k_phi * omega_m
                      : 0.0;
          f(2 * npos_ + i) = current_derivative(p, ms, omega_m);
        }
      }
    }
    return f;
  }

  StateVec step(double t, const StateVec& x, double dt) const {
    const auto deriv = [this](double tt, const StateVec& xx) { return derivative(tt, xx); };
    if (cfg_.integrator == Integrator::rk4) return rk4_step(deriv, t, x, dt);

    const StateVec f = derivative(t, x);
    StateVec next = x;
    next.segment(npos_, npos_) += dt * f.segment(npos_, npos_);
    next.head(npos_) += dt * next.segment(npos_, npos_);
    if (electrical_) next.tail(kNumJoints) += dt * f.tail(kNumJoints);
    return next;
  }

  void check(double t, const StateVec& x) const {
    if (!x.allFinite()) throw NumericalError(fmt::format("state diverged at t = {} s", t));
    if (electrical_) {
      for (int i = 0; i < kNumJoints; ++i) {
        MotorState ms;
        ms.ia = x(2 * npos_ + i);
        if (!motor_state_ok(ms, cfg_.stall_current))
          throw NumericalError(
              fmt::format("motor {} current {} A exceeds the stall limit at t = {} s", i + 1, ms.ia, t));
      }
    }
  }

  const RobotModel& plant_model() const { return plant_model_; }

 private:
  const SimConfig& cfg_;
  const RobotModel& controller_model_;
  RobotModel plant_model_;
  bool sea_;
  bool electrical_;
  Eigen::Index npos_;
};

Trajectory simulate(const SimConfig& cfg, const RobotModel& m) {
  const Plant plant(cfg, m);
  Trajectory tr;
  tr.tracking = cfg.scenario == ScenarioKind::tracking;
  const std::size_t n = trajectory_row_count(cfg.dt, cfg.t_end);
  tr.rows.reserve(n);

  StateVec x = plant.initial_state();
  const double t0 = cfg.initial.t;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * cfg.dt;
    if (k > 0) {
      const double t_prev = t0 + static_cast<double>(k - 1) * cfg.dt;
      x = plant.step(t_prev, x, cfg.dt);
    }
    plant.check(t, x);

    const JointState s = plant.link_state(t, x);
    TrajectoryRow row;
    row.t = t;
    row.q = s.q;
    row.qd = s.qd;
    row.tau = plant.link_torque(t, x);
    const EnergyReport en = energies(plant.plant_model(), s);
    row.T = en.T;
    row.V = en.V;
    row.E = en.total();
    if (tr.tracking) row.e = tracking_error(s, cfg.controller->reference.at(t)).e;
    tr.rows.push_back(row);
  }
  return tr;
}

// ---- config parsing ---------------------------------------------------------

Vector6 read_vec6(const Json& j, const std::string& path) {
  Vector6 v;
  if (j.is_number()) return Vector6::Constant(j.get<double>());
  if (!j.is_array() || j.size() != kNumJoints)
    throw ConfigError(fmt::format("{}: expected a number or an array of 6 numbers", path));
  for (int i = 0; i < kNumJoints; ++i) {
    if (!j[i].is_number()) throw ConfigError(fmt::format("{}[{}]: expected a number", path, i));
    v(i) = j[i].get<double>();
  }
  return v;
}

double read_double(const Json& obj, const char* key, const std::string& path, std::optional<double> fallback = {}) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    throw ConfigError(fmt::format("{}.{}: missing field", path, key));
  }
  if (!it->is_number()) throw ConfigError(fmt::format("{}.{}: expected a number", path, key));
  return it->get<double>();
}

Vector6 read_vec6_field(const Json& obj, const char* key, const std::string& path,
                        std::optional<Vector6> fallback = {}) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    throw ConfigError(fmt::format("{}.{}: missing field", path, key));
  }
  return read_vec6(*it, path + "." + key);
}

bool read_bool(const Json& obj, const char* key, const std::string& path, bool fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) throw ConfigError(fmt::format("{}.{}: expected true or false", path, key));
  return it->get<bool>();
}

ReferenceTrajectory read_reference(const Json& j) {
  const std::string path = "config.controller.reference";
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  const auto kind_it = j.find("kind");
  if (kind_it == j.end() || !kind_it->is_string()) throw ConfigError(path + ".kind: expected a string");
  const std::string kind = kind_it->get<std::string>();
  try {
    if (kind == "hold") return ReferenceTrajectory::hold(read_vec6_field(j, "q_rad", path));
    if (kind == "sinusoid")
      return ReferenceTrajectory::sinusoid(read_vec6_field(j, "offset_rad", path, Vector6::Zero()),
                                           read_vec6_field(j, "amplitude_rad", path),
                                           read_vec6_field(j, "frequency_radps", path),
                                           read_vec6_field(j, "phase_rad", path, Vector6::Zero()));
    if (kind == "spline") {
      const auto knots_it = j.find("knots");
      if (knots_it == j.end() || !knots_it->is_array()) throw ConfigError(path + ".knots: expected an array");
      std::vector<SplineKnot> knots;
      for (std::size_t i = 0; i < knots_it->size(); ++i) {
        const std::string kp = fmt::format("{}.knots[{}]", path, i);
        const Json& k = (*knots_it)[i];
        if (!k.is_object()) throw ConfigError(kp + ": expected an object");
        knots.push_back({read_double(k, "t_s", kp), read_vec6_field(k, "q_rad", kp)});
      }
      return ReferenceTrajectory::spline(std::move(knots));
    }
  } catch (const ControlError& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
  throw ConfigError(fmt::format("{}.kind: unknown reference kind '{}'", path, kind));
}

ControllerConfig read_controller(const Json& j) {
  const std::string path = "config.controller";
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  ControllerConfig c;
  if (const auto it = j.find("poles"); it != j.end()) {
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
      throw ConfigError(path + ".poles: expected two pole magnitudes");
    try {
      c.gains = gains_from_poles((*it)[0].get<double>(), (*it)[1].get<double>());
    } catch (const ControlError& e) {
      throw ConfigError(fmt::format("{}.poles: {}", path, e.what()));
    }
  } else {
    c.gains = Gains::uniform(read_double(j, "kp", path, 320.0), read_double(j, "kd", path, 48.0));
  }
  c.gains.kp = read_vec6_field(j, "kp_per_joint", path, c.gains.kp);
  c.gains.kd = read_vec6_field(j, "kd_per_joint", path, c.gains.kd);
  c.compensate_damping = read_bool(j, "compensate_damping", path, true);
  c.plant_mass_scale = read_double(j, "plant_mass_scale", path, 1.0);
  const auto ref = j.find("reference");
  if (ref == j.end()) throw ConfigError(path + ".reference: missing field");
  c.reference = read_reference(*ref);
  return c;
}

}  // namespace

JointState rk4_step(const RobotModel& m, const JointState& s, const TorqueFn& tau_fn, double dt) {
  using State = Eigen::Matrix<double, 2 * kNumJoints, 1>;
  const Vector6 beta = m.damping();
  const auto deriv = [&](double t, const State& x) -> State {
    JointState js;
    js.t = t;
    js.q = x.head<kNumJoints>();
    js.qd = x.tail<kNumJoints>();
    State f;
    f.head<kNumJoints>() = js.qd;
    f.tail<kNumJoints>() = forward_dynamics(m, js, generalized_forces(tau_fn(js), beta, js.qd));
    return f;
  };
  State x;
  x << s.q, s.qd;
  const State next = rk4_step(deriv, s.t, x, dt);
  JointState out;
  out.t = s.t + dt;
  out.q = next.head<kNumJoints>();
  out.qd = next.tail<kNumJoints>();
  check_finite(out, out.t);
  return out;
}

std::size_t trajectory_row_count(double dt, double t_end) {
  const double ratio = t_end / dt;
  // Snap ratios within rounding noise of an integer onto it.
  const double nearest = std::round(ratio);
  const double steps = std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest) ? nearest : std::floor(ratio);
  return static_cast<std::size_t>(steps) + 1;
}

void validate_config(const SimConfig& cfg) {
  if (!(cfg.dt > 0.0 && cfg.dt <= 0.01)) throw ConfigError(fmt::format("dt must satisfy 0 < dt <= 0.01 (got {})", cfg.dt));
  if (!(cfg.t_end > cfg.dt) || !std::isfinite(cfg.t_end))
    throw ConfigError(fmt::format("t_end must exceed dt (got t_end = {}, dt = {})", cfg.t_end, cfg.dt));
  if (!cfg.initial.q.allFinite() || !cfg.initial.qd.allFinite() || !std::isfinite(cfg.initial.t))
    throw ConfigError("initial state must be finite");
  if (cfg.scenario == ScenarioKind::tracking && !cfg.controller)
    throw ConfigError("scenario 'tracking' needs a controller section");
  if (cfg.scenario != ScenarioKind::tracking && cfg.controller)
    throw ConfigError(fmt::format("scenario '{}' does not take a controller section", scenario_name(cfg.scenario)));
  if (cfg.controller) {
    const Gains& g = cfg.controller->gains;
    if (!(g.kp.array() > 0.0).all() || !(g.kd.array() > 0.0).all()) throw ConfigError("gains kp and kd must be > 0");
    if (!(cfg.controller->plant_mass_scale > 0.0)) throw ConfigError("plant_mass_scale must be > 0");
  }
  if (cfg.series_elastic.enabled && (!(cfg.series_elastic.stiffness > 0.0) || !(cfg.series_elastic.motor_inertia > 0.0)))
    throw ConfigError("series_elastic stiffness and motor_inertia must be > 0");
  if (!(cfg.stall_current > 0.0)) throw ConfigError("stall_current must be > 0");
  if (cfg.scenario == ScenarioKind::sweep) {
    if (cfg.sweep.joints.empty()) throw ConfigError("sweep.joints must not be empty");
    if (cfg.sweep.steps < 2) throw ConfigError("sweep.steps must be >= 2");
  }
}

SimConfig parse_sim_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(fmt::format("config parse error: {}", e.what()));
  }
  const std::string path = "config";
  if (!j.is_object()) throw ConfigError("config: expected an object");
  const auto schema = j.find("schema");
  if (schema == j.end() || !schema->is_number_integer() || schema->get<int>() != kSchemaVersion)
    throw ConfigError(fmt::format("config.schema: unsupported schema (expected {})", kSchemaVersion));

  SimConfig cfg;
  const auto scenario = j.find("scenario");
  if (scenario == j.end() || !scenario->is_string()) throw ConfigError("config.scenario: expected a string");
  const std::string sname = scenario->get<std::string>();
  if (sname == "zero_input")
    cfg.scenario = ScenarioKind::zero_input;
  else if (sname == "tracking")
    cfg.scenario = ScenarioKind::tracking;
  else if (sname == "sweep")
    cfg.scenario = ScenarioKind::sweep;
  else
    throw ConfigError(fmt::format("config.scenario: unknown scenario '{}'", sname));

  if (const auto it = j.find("integrator"); it != j.end()) {
    const std::string name = it->is_string() ? it->get<std::string>() : "";
    if (name == "rk4")
      cfg.integrator = Integrator::rk4;
    else if (name == "semi_implicit_euler")
      cfg.integrator = Integrator::semi_implicit_euler;
    else
      throw ConfigError("config.integrator: expected 'rk4' or 'semi_implicit_euler'");
  }
  cfg.dt = read_double(j, "dt_s", path, cfg.dt);
  cfg.t_end = read_double(j, "t_end_s", path, cfg.t_end);
  if (const auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned()) throw ConfigError("config.seed: expected a non-negative integer");
    cfg.seed = it->get<std::uint64_t>();
  }
  if (const auto it = j.find("output"); it != j.end() && it->is_string()) cfg.output = it->get<std::string>();
  cfg.electrical = read_bool(j, "electrical", path, false);
  cfg.stall_current = read_double(j, "stall_current_A", path, cfg.stall_current);

  if (const auto it = j.find("series_elastic"); it != j.end()) {
    const std::string sp = "config.series_elastic";
    cfg.series_elastic.enabled = read_bool(*it, "enabled", sp, false);
    cfg.series_elastic.stiffness = read_double(*it, "stiffness_Nm_per_rad", sp, cfg.series_elastic.stiffness);
    cfg.series_elastic.motor_inertia = read_double(*it, "motor_inertia_kgm2", sp, cfg.series_elastic.motor_inertia);
  }

  if (const auto it = j.find("controller"); it != j.end() && !it->is_null()) cfg.controller = read_controller(*it);

  if (const auto it = j.find("sweep"); it != j.end()) {
    const std::string sp = "config.sweep";
    if (const auto jt = it->find("joints"); jt != it->end()) {
      if (!jt->is_array()) throw ConfigError(sp + ".joints: expected an array of joint indices");
      cfg.sweep.joints.clear();
      for (const auto& v : *jt) {
        if (!v.is_number_integer()) throw ConfigError(sp + ".joints: expected integers");
        cfg.sweep.joints.push_back(v.get<int>());
      }
    }
    cfg.sweep.from_deg = read_double(*it, "from_deg", sp, cfg.sweep.from_deg);
    cfg.sweep.to_deg = read_double(*it, "to_deg", sp, cfg.sweep.to_deg);
    cfg.sweep.steps = static_cast<int>(read_double(*it, "steps", sp, cfg.sweep.steps));
  }

  if (const auto it = j.find("initial_state"); it != j.end()) {
    const std::string sp = "config.initial_state";
    cfg.initial.t = read_double(*it, "t_s", sp, 0.0);
    if (it->contains("tracking_error_rad")) {
      // Initial state expressed relative to the reference at t0.
      if (!cfg.controller) throw ConfigError(sp + ".tracking_error_rad needs a controller section");
      const Reference ref = cfg.controller->reference.at(cfg.initial.t);
      cfg.initial.q = ref.qd + read_vec6_field(*it, "tracking_error_rad", sp);
      cfg.initial.qd = ref.qd_dot + read_vec6_field(*it, "tracking_error_rate_radps", sp, Vector6::Zero());
    } else {
      cfg.initial.q = read_vec6_field(*it, "q_rad", sp, Vector6::Zero());
      cfg.initial.qd = read_vec6_field(*it, "qd_radps", sp, Vector6::Zero());
    }
  }

  validate_config(cfg);
  return cfg;
}

SimConfig load_sim_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sim_config(buf.str());
}

ScenarioOutput run_scenario(const SimConfig& cfg, const RobotModel& m) {
  validate_config(cfg);
  if (cfg.scenario == ScenarioKind::sweep) {
    try {
      return joint_sweep(m, cfg.sweep.joints, cfg.sweep.from_deg * kDegToRad, cfg.sweep.to_deg * kDegToRad,
                         cfg.sweep.steps);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return simulate(cfg, m);
}

// ---- CSV --------------------------------------------------------------------

namespace {

std::string trajectory_header(bool tracking) {
  std::string h = "t";
  for (const char* prefix : {"q", "qd", "tau"})
    for (int i = 1; i <= kNumJoints; ++i) h += fmt::format(",{}{}", prefix, i);
  h += ",T,V,E";
  if (tracking)
    for (int i = 1; i <= kNumJoints; ++i) h += fmt::format(",e{}", i);
  return h;
}

// 17 significant digits, explicit sign: fixed width for |exponent| < 100.
void append_number(fmt::memory_buffer& buf, double v) { fmt::format_to(std::back_inserter(buf), "{:+.16e}", v); }

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  out << text;
  out.flush();
  if (!out) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
}

}  // namespace

std::string trajectory_csv(const Trajectory& tr) {
  fmt::memory_buffer buf;
  const std::string header = trajectory_header(tr.tracking);
  buf.append(header.data(), header.data() + header.size());
  buf.push_back('\n');
  for (const TrajectoryRow& r : tr.rows) {
    append_number(buf, r.t);
    for (const Vector6* v : {&r.q, &r.qd, &r.tau})
      for (int i = 0; i < kNumJoints; ++i) {
        buf.push_back(',');
        append_number(buf, (*v)(i));
      }
    for (const double v : {r.T, r.V, r.E}) {
      buf.push_back(',');
      append_number(buf, v);
    }
    if (tr.tracking)
      for (int i = 0; i < kNumJoints; ++i) {
        buf.push_back(',');
        append_number(buf, r.e(i));
      }
    buf.push_back('\n');
  }
  return fmt::to_string(buf);
}

void write_csv(const Trajectory& tr, const std::filesystem::path& path) { write_text(trajectory_csv(tr), path); }

Trajectory read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(fmt::format("'{}' has no header", path.string()));
  Trajectory tr;
  if (line == trajectory_header(true))
    tr.tracking = true;
  else if (line != trajectory_header(false))
    throw std::runtime_error(fmt::format("'{}' is not a trajectory CSV", path.string()));

  const std::size_t columns = tr.tracking ? 1 + 18 + 3 + 6 : 1 + 18 + 3;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<double> values;
    const char* p = line.c_str();
    while (true) {
      char* end = nullptr;
      const double v = std::strtod(p, &end);
      if (end == p) throw std::runtime_error(fmt::format("{}:{}: malformed number", path.string(), line_no));
      values.push_back(v);
      if (*end == '\0') break;
      if (*end != ',') throw std::runtime_error(fmt::format("{}:{}: expected ','", path.string(), line_no));
      p = end + 1;
    }
    if (values.size() != columns)
      throw std::runtime_error(fmt::format("{}:{}: expected {} columns, got {}", path.string(), line_no, columns,
                                           values.size()));
    TrajectoryRow r;
    std::size_t k = 0;
    r.t = values[k++];
    for (Vector6* v : {&r.q, &r.qd, &r.tau})
      for (int i = 0; i < kNumJoints; ++i) (*v)(i) = values[k++];
    r.T = values[k++];
    r.V = values[k++];
    r.E = values[k++];
    if (tr.tracking)
      for (int i = 0; i < kNumJoints; ++i) r.e(i) = values[k++];
    tr.rows.push_back(r);
  }
  return tr;
}

std::string sweep_csv(const SweepTable& table) {
  fmt::memory_buffer buf;
  auto out = std::back_inserter(buf);
  for (std::size_t j = 0; j < table.joints.size(); ++j)
    fmt::format_to(out, "{}th{}_deg", j == 0 ? "" : ",", table.joints[j]);
  fmt::format_to(out, ",base_x,base_y,base_z");
  for (int f = 1; f <= kNumJoints; ++f) fmt::format_to(out, ",frame{0}_x,frame{0}_y,frame{0}_z", f);
  buf.push_back('\n');
  for (std::size_t r = 0; r < table.angles.size(); ++r) {
    for (std::size_t j = 0; j < table.joints.size(); ++j) {
      if (j > 0) buf.push_back(',');
      append_number(buf, table.angles[r] / kDegToRad);
    }
    for (const Vector3& o : table.origins[r])
      for (int c = 0; c < 3; ++c) {
        buf.push_back(',');
        append_number(buf, o(c));
      }
    buf.push_back('\n');
  }
  return fmt::to_string(buf);
}

void write_sweep_csv(const SweepTable& table, const std::filesystem::path& path) {
  write_text(sweep_csv(table), path);
}

std::string run_metadata(const SimConfig& cfg, const RobotModel& m, std::size_t rows) {
  nlohmann::ordered_json j;
  j["schema"] = kSchemaVersion;
  j["seed"] = cfg.seed;
  j["scenario"] = scenario_name(cfg.scenario);
  j["integrator"] = integrator_name(cfg.integrator);
  j["dt_s"] = cfg.dt;
  j["t_end_s"] = cfg.t_end;
  j["rows"] = rows;
  j["model"] = m.name;
  j["electrical"] = cfg.electrical;
  j["series_elastic"] = cfg.series_elastic.enabled;
  return j.dump(2) + "\n";
}

}  // namespace blue
