// blue: scenario and design-check command line for the BLUE biped toolkit.
//
// Exit status: 0 success, 1 validation error, 2 numerical divergence.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "blue/actuation.hpp"
#include "blue/control.hpp"
#include "blue/design_check.hpp"
#include "blue/dynamics.hpp"
#include "blue/kinematics.hpp"
#include "blue/model.hpp"
#include "blue/sim.hpp"

namespace {

using namespace blue;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitDivergence = 2;

constexpr double kDeg = std::numbers::pi / 180.0;

std::string num(double v) { return fmt::format("{:.17g}", v); }

Vector6 to_vec6(const std::vector<double>& v, const char* what) {
  if (v.size() != kNumJoints) throw ConfigError(fmt::format("{} needs exactly 6 values (got {})", what, v.size()));
  return Eigen::Map<const Vector6>(v.data());
}

void write_or_print(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot open '{}' for writing", out));
  f << text;
}

Json row_json(const design::SpeedTorqueRow& r) {
  Json j;
  j["in_rpm"] = r.in_rpm;
  j["out_rpm"] = r.out_rpm;
  j["axle_rpm"] = r.axle_rpm;
  j["tau_in_Nm"] = r.tau_in;
  j["tau_out_Nm"] = r.tau_out;
  j["tau_axle_Nm"] = r.tau_axle;
  return j;
}

std::string table_csv(const std::vector<design::SpeedTorqueRow>& rows) {
  std::string s = "in_rpm,out_rpm,axle_rpm,tau_in_Nm,tau_out_Nm,tau_axle_Nm\n";
  for (const auto& r : rows)
    s += fmt::format("{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f}\n", r.in_rpm, r.out_rpm, r.axle_rpm, r.tau_in,
                     r.tau_out, r.tau_axle);
  return s;
}

/// Largest relative deviation from the published table for rows whose input speed matches.
Json table_comparison(const std::vector<design::SpeedTorqueRow>& rows) {
  Json cmp = Json::array();
  for (const auto& r : rows)
    for (const auto& p : design::published_speed_torque_table()) {
      if (p.in_rpm != r.in_rpm) continue;
      const auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
      Json c;
      c["in_rpm"] = r.in_rpm;
      c["max_rel_dev"] = std::max({rel(r.out_rpm, p.out_rpm), rel(r.axle_rpm, p.axle_rpm), rel(r.tau_in, p.tau_in),
                                   rel(r.tau_out, p.tau_out), rel(r.tau_axle, p.tau_axle)});
      cmp.push_back(c);
    }
  return cmp;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BLUE biped simulator and design-verification toolkit"};
  app.require_subcommand(1);
  std::string model_path = BLUE_DEFAULT_MODEL;

  // simulate ------------------------------------------------------------------
  auto* sim_cmd = app.add_subcommand("simulate", "Run a scenario config and write its trajectory CSV");
  std::string config_path, sim_out;
  std::int64_t seed = -1;
  sim_cmd->add_option("--config", config_path, "Scenario config file")->required();
  sim_cmd->add_option("--model", model_path, "Robot model file");
  sim_cmd->add_option("--out", sim_out, "Output CSV (overrides the config's output)");
  sim_cmd->add_option("--seed", seed, "Seed recorded in the run metadata");

  // fk-sweep ------------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("fk-sweep", "Sweep joints and tabulate frame origins");
  std::vector<int> sweep_joints{0, 1, 4};
  double sweep_from = 0.0, sweep_to = 15.0;
  int sweep_steps = 16;
  std::string sweep_out;
  sweep_cmd->add_option("--model", model_path, "Robot model file");
  sweep_cmd->add_option("--joints", sweep_joints, "Joint indices (0 = stance angle)")->delimiter(',');
  sweep_cmd->add_option("--from", sweep_from, "Start angle, degrees");
  sweep_cmd->add_option("--to", sweep_to, "End angle, degrees");
  sweep_cmd->add_option("--steps", sweep_steps, "Number of rows");
  sweep_cmd->add_option("--out", sweep_out, "Output CSV (stdout if omitted)");

  // dyn -----------------------------------------------------------------------
  auto* dyn_cmd = app.add_subcommand("dyn", "Print D, C, G and the energies at a state");
  std::vector<double> dyn_q(kNumJoints, 0.0), dyn_qd(kNumJoints, 0.0);
  bool dyn_pretty = false, dyn_deg = false;
  dyn_cmd->add_option("--model", model_path, "Robot model file");
  dyn_cmd->add_option("--q", dyn_q, "Joint angles (rad unless --deg)")->delimiter(',');
  dyn_cmd->add_option("--qd", dyn_qd, "Joint rates (rad/s unless --deg)")->delimiter(',');
  dyn_cmd->add_flag("--deg", dyn_deg, "Angles and rates are in degrees");
  dyn_cmd->add_flag("--pretty", dyn_pretty, "Aligned human-readable output instead of CSV");

  // drivetrain ----------------------------------------------------------------
  auto* drive_cmd = app.add_subcommand("drivetrain", "Speed/torque propagation through the belt stages");
  double drive_power = design::kActuatorPower_W;
  double drive_r1 = kStage1Ratio, drive_r2 = kStage2Ratio;
  std::vector<double> drive_speeds = design::published_input_speeds();
  drive_cmd->add_option("--power", drive_power, "Motor power, W");
  drive_cmd->add_option("--speeds", drive_speeds, "Input speeds, rpm")->delimiter(',');
  drive_cmd->add_option("--r1", drive_r1, "First stage speed ratio");
  drive_cmd->add_option("--r2", drive_r2, "Second stage speed ratio");

  // design-check --------------------------------------------------------------
  auto* dc_cmd = app.add_subcommand("design-check", "Mechanical design-limit calculations");
  dc_cmd->require_subcommand(1);
  bool dc_json = false;
  dc_cmd->add_flag("--json", dc_json, "Machine-readable output with every intermediate term");

  auto* dc_table = dc_cmd->add_subcommand("table", "Actuator speed/torque table");
  dc_table->add_option("--power", drive_power, "Motor power, W");
  dc_table->add_option("--speeds", drive_speeds, "Input speeds, rpm")->delimiter(',');
  dc_table->add_option("--r1", drive_r1, "First stage speed ratio");
  dc_table->add_option("--r2", drive_r2, "Second stage speed ratio");
  dc_table->add_flag("--json", dc_json, "JSON output");

  design::BaseLoadCase base_case;
  auto* dc_base = dc_cmd->add_subcommand("base", "Actuator-base force limit");
  dc_base->add_option("--Se", base_case.Se, "Endurance limit, Pa");
  dc_base->add_option("--fs", base_case.fs, "Safety factor");
  dc_base->add_option("--arm", base_case.moment_arm, "Moment arm factor");
  dc_base->add_option("--modulus", base_case.section_modulus, "Section modulus term");
  dc_base->add_option("--Kf", base_case.Kf, "Fatigue stress-concentration factor");
  dc_base->add_flag("--json", dc_json, "JSON output");

  design::FemurLoadCase femur_case;
  auto* dc_femur = dc_cmd->add_subcommand("femur", "Femur bending force limit");
  dc_femur->add_option("--Se", femur_case.Se, "Endurance limit, Pa");
  dc_femur->add_option("--fs", femur_case.fs, "Safety factor");
  dc_femur->add_option("--axial", femur_case.axial_force, "Axial force, N");
  dc_femur->add_option("--area", femur_case.area, "Cross-section area, m^2");
  dc_femur->add_option("--c", femur_case.c, "Bending distance term");
  dc_femur->add_option("--I", femur_case.I, "Second moment of area, m^4");
  dc_femur->add_flag("--json", dc_json, "JSON output");

  design::StressInputs shaft;
  shaft.Se = 180e6;
  shaft.Sy = 250e6;
  shaft.fs = 2.0;
  shaft.Kf_bend = 1.5;
  shaft.Kf_tors = 1.5;
  shaft.Ma = 2.0;
  double shaft_D_mm = 20.0, shaft_d_mm = 10.0;
  auto* dc_shaft = dc_cmd->add_subcommand("shaft", "Hollow internal-shaft alternating torque capacity");
  dc_shaft->add_option("--D-mm", shaft_D_mm, "Outer diameter, mm");
  dc_shaft->add_option("--d-mm", shaft_d_mm, "Inner diameter, mm");
  dc_shaft->add_option("--Se", shaft.Se, "Endurance limit, Pa");
  dc_shaft->add_option("--fs", shaft.fs, "Safety factor");
  dc_shaft->add_option("--kft", shaft.Kf_tors, "Torsional fatigue factor");
  dc_shaft->add_option("--kff", shaft.Kf_bend, "Bending fatigue factor");
  dc_shaft->add_option("--Ma", shaft.Ma, "Alternating moment, N m");
  dc_shaft->add_flag("--json", dc_json, "JSON output");

  double ell_Sa = 0.0, ell_Sm = 0.0, ell_Se = 180e6, ell_Sy = 250e6;
  auto* dc_ell = dc_cmd->add_subcommand("elliptic", "ASME-elliptic utilization of a stress state");
  dc_ell->add_option("--Sa", ell_Sa, "Alternating stress, Pa");
  dc_ell->add_option("--Sm", ell_Sm, "Mean stress, Pa");
  dc_ell->add_option("--Se", ell_Se, "Endurance limit, Pa");
  dc_ell->add_option("--Sy", ell_Sy, "Yield strength, Pa");
  dc_ell->add_flag("--json", dc_json, "JSON output");

  // gains ---------------------------------------------------------------------
  auto* gains_cmd = app.add_subcommand("gains", "PD gains from two real pole magnitudes");
  std::vector<double> poles{8.0, 40.0};
  gains_cmd->add_option("--poles", poles, "Pole magnitudes p1,p2 (poles at -p1, -p2)")->delimiter(',')->expected(2);

  // model ---------------------------------------------------------------------
  auto* model_cmd = app.add_subcommand("model", "Validate a model file and print its canonical form");
  std::string model_out;
  model_cmd->add_option("--model", model_path, "Robot model file");
  model_cmd->add_option("--out", model_out, "Write the canonical form here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*sim_cmd) {
      const RobotModel m = load_model(model_path);
      SimConfig cfg = load_sim_config(config_path);
      if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
      if (!sim_out.empty()) cfg.output = sim_out;
      if (cfg.output.empty()) throw ConfigError("no output path: pass --out or set 'output' in the config");
      const ScenarioOutput result = run_scenario(cfg, m);
      std::size_t rows = 0;
      if (const auto* tr = std::get_if<Trajectory>(&result)) {
        write_csv(*tr, cfg.output);
        rows = tr->rows.size();
      } else {
        const auto& table = std::get<SweepTable>(result);
        write_sweep_csv(table, cfg.output);
        rows = table.angles.size();
      }
      write_or_print(run_metadata(cfg, m, rows), cfg.output + ".meta.json");
      std::cerr << fmt::format("wrote {} rows to {}\n", rows, cfg.output);
    } else if (*sweep_cmd) {
      const RobotModel m = load_model(model_path);
      try {
        write_or_print(sweep_csv(joint_sweep(m, sweep_joints, sweep_from * kDeg, sweep_to * kDeg, sweep_steps)),
                       sweep_out);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    } else if (*dyn_cmd) {
      const RobotModel m = load_model(model_path);
      JointState s;
      s.q = to_vec6(dyn_q, "--q");
      s.qd = to_vec6(dyn_qd, "--qd");
      if (dyn_deg) {
        s.q *= kDeg;
        s.qd *= kDeg;
      }
      const DynamicsMatrices dm = dynamics_matrices(m, s.q, s.qd);
      const EnergyReport e = energies(m, s);
      std::string out;
      if (dyn_pretty) {
        const auto block = [&](const char* name, const auto& mat) {
          out += fmt::format("{} =\n", name);
          for (int r = 0; r < mat.rows(); ++r) {
            for (int c = 0; c < mat.cols(); ++c) out += fmt::format(" {:>14.6e}", mat(r, c));
            out += "\n";
          }
        };
        block("D [kg m^2]", dm.D);
        block("C [kg m^2/s]", dm.C);
        block("G^T [N m]", dm.G.transpose());
        out += fmt::format("T = {:.9g} J\nV = {:.9g} J\nL = {:.9g} J\n", e.T, e.V, e.L);
      } else {
        const auto rows = [&](const char* name, const auto& mat) {
          for (int r = 0; r < mat.rows(); ++r) {
            out += name;
            for (int c = 0; c < mat.cols(); ++c) out += "," + num(mat(r, c));
            out += "\n";
          }
        };
        rows("D", dm.D);
        rows("C", dm.C);
        rows("G", dm.G.transpose());
        out += fmt::format("T,{}\nV,{}\nL,{}\n", num(e.T), num(e.V), num(e.L));
      }
      std::cout << out;
    } else if (*drive_cmd) {
      std::cout << table_csv(design::speed_torque_table(drive_speeds, drive_power, drive_r1, drive_r2));
    } else if (*dc_cmd) {
      if (*dc_table) {
        const auto rows = design::speed_torque_table(drive_speeds, drive_power, drive_r1, drive_r2);
        if (dc_json) {
          Json j;
          j["power_W"] = drive_power;
          j["r1"] = drive_r1;
          j["r2"] = drive_r2;
          j["rows"] = Json::array();
          for (const auto& r : rows) j["rows"].push_back(row_json(r));
          j["published_comparison"] = table_comparison(rows);
          std::cout << j.dump(2) << "\n";
        } else {
          std::cout << table_csv(rows);
        }
      } else if (*dc_base) {
        const double F = design::base_force_limit(base_case);
        if (dc_json) {
          Json j;
          j["Se_Pa"] = base_case.Se;
          j["fs"] = base_case.fs;
          j["moment_arm"] = base_case.moment_arm;
          j["section_modulus"] = base_case.section_modulus;
          j["Kf"] = base_case.Kf;
          j["allowable_stress_Pa"] = base_case.Se / base_case.fs;
          j["force_limit_N"] = F;
          j["stress_ratio_at_limit"] = design::base_stress_ratio(base_case, F);
          j["target_ratio"] = 1.0 / (base_case.fs * base_case.fs);
          std::cout << j.dump(2) << "\n";
        } else {
          std::cout << fmt::format("base force limit F = {:.4f} N\n", F);
        }
      } else if (*dc_femur) {
        const double F = design::femur_force_limit(femur_case);
        if (dc_json) {
          Json j;
          j["Se_Pa"] = femur_case.Se;
          j["fs"] = femur_case.fs;
          j["axial_force_N"] = femur_case.axial_force;
          j["area_m2"] = femur_case.area;
          j["c"] = femur_case.c;
          j["I_m4"] = femur_case.I;
          j["allowable_stress_Pa"] = femur_case.Se / femur_case.fs;
          j["axial_stress_Pa"] = femur_case.axial_force / femur_case.area;
          j["force_limit_N"] = F;
          j["stress_at_limit_Pa"] = design::femur_stress(femur_case, F);
          std::cout << j.dump(2) << "\n";
        } else {
          std::cout << fmt::format("femur force limit F = {:.4f} N\n", F);
        }
      } else if (*dc_shaft) {
        shaft.section.D = shaft_D_mm * 1e-3;
        shaft.section.d = shaft_d_mm * 1e-3;
        const design::ShaftCapacityTerms t = design::internal_shaft_torque_terms(shaft);
        if (dc_json) {
          Json j;
          j["D_m"] = shaft.section.D;
          j["d_m"] = shaft.section.d;
          j["Se_Pa"] = shaft.Se;
          j["fs"] = shaft.fs;
          j["k_ft"] = shaft.Kf_tors;
          j["k_ff"] = shaft.Kf_bend;
          j["Ma_Nm"] = shaft.Ma;
          j["section_term"] = t.section_term;
          j["moment_term"] = t.moment_term;
          j["radicand"] = t.radicand;
          j["torque_capacity_Nm"] = t.torque;
          std::cout << j.dump(2) << "\n";
        } else {
          std::cout << fmt::format("alternating torque capacity Ta = {:.4f} N m\n", t.torque);
        }
      } else if (*dc_ell) {
        const double u = design::asme_elliptic_utilization(ell_Sa, ell_Sm, ell_Se, ell_Sy);
        if (dc_json) {
          Json j;
          j["Sa_Pa"] = ell_Sa;
          j["Sm_Pa"] = ell_Sm;
          j["Se_Pa"] = ell_Se;
          j["Sy_Pa"] = ell_Sy;
          j["utilization"] = u;
          j["passes"] = u <= 1.0;
          std::cout << j.dump(2) << "\n";
        } else {
          std::cout << fmt::format("utilization = {:.6f} ({})\n", u, u <= 1.0 ? "pass" : "fail");
        }
      }
    } else if (*gains_cmd) {
      const Gains g = gains_from_poles(poles.at(0), poles.at(1));
      std::cout << fmt::format("kp,{}\nkd,{}\n", num(g.kp(0)), num(g.kd(0)));
    } else if (*model_cmd) {
      write_or_print(serialize_model(load_model(model_path)), model_out);
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
