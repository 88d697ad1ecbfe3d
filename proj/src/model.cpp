#include "blue/model.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace blue {

namespace {

using Json = nlohmann::ordered_json;

std::string link_field(int i, const char* field) {
  return fmt::format("links[{}].{}", kBodyNames[i], field);
}

bool in_half_open_pi(double angle) {
  return angle > -std::numbers::pi && angle <= std::numbers::pi;
}

void check_dh_row(const DHRow& row, const std::string& prefix, std::vector<std::string>& out) {
  const auto check_finite = [&](double v, const char* field) {
    if (!std::isfinite(v)) out.push_back(fmt::format("{}.{} must be finite (observed {})", prefix, field, v));
  };
  check_finite(row.a_prev, "a_prev");
  check_finite(row.d, "d");
  if (!std::isfinite(row.alpha_prev) || !in_half_open_pi(row.alpha_prev))
    out.push_back(fmt::format("{}.alpha_prev must lie in (-pi, pi] (observed {})", prefix, row.alpha_prev));
  if (!std::isfinite(row.theta_offset) || !in_half_open_pi(row.theta_offset))
    out.push_back(fmt::format("{}.theta_offset must lie in (-pi, pi] (observed {})", prefix, row.theta_offset));
}

void check_inertia(const Matrix3& inertia, int i, std::vector<std::string>& out) {
  const std::string field = link_field(i, "inertia");
  if (!inertia.allFinite()) {
    out.push_back(field + " must be finite");
    return;
  }
  const double scale = std::max(inertia.cwiseAbs().maxCoeff(), 1e-300);
  const double sym_tol = 1e-12 * scale;
  if ((inertia - inertia.transpose()).cwiseAbs().maxCoeff() > sym_tol) {
    out.push_back(fmt::format("{} not symmetric (Ixy={} Iyx={}, Ixz={} Izx={}, Iyz={} Izy={})", field,
                              inertia(0, 1), inertia(1, 0), inertia(0, 2), inertia(2, 0), inertia(1, 2),
                              inertia(2, 1)));
    return;
  }
  const Eigen::SelfAdjointEigenSolver<Matrix3> eig(inertia, Eigen::EigenvaluesOnly);
  const Vector3 p = eig.eigenvalues();  // ascending
  const double psd_tol = 1e-12 * scale;
  if (p(0) < -psd_tol) {
    out.push_back(fmt::format("{} not positive semi-definite (smallest principal moment {})", field, p(0)));
    return;
  }
  // p(2) is the largest moment, so this is the only inequality that can fail.
  if (p(0) + p(1) < p(2) - psd_tol) {
    out.push_back(fmt::format("{} violates triangle inequality on principal moments ({} + {} < {})", field, p(0),
                              p(1), p(2)));
  }
}

// --- JSON readers with field-path diagnostics --------------------------------

const Json& require(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ModelError(fmt::format("{}: expected an object", path));
  const auto it = j.find(key);
  if (it == j.end()) throw ModelError(fmt::format("{}.{}: missing field", path, key));
  return *it;
}

double read_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ModelError(fmt::format("{}: expected a number", path));
  return j.get<double>();
}

double read_number(const Json& j, const char* key, const std::string& path) {
  return read_number(require(j, key, path), path + "." + key);
}

Vector3 read_vec3(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw ModelError(fmt::format("{}: expected an array of 3 numbers", path));
  Vector3 v;
  for (int k = 0; k < 3; ++k) v(k) = read_number(j[k], fmt::format("{}[{}]", path, k));
  return v;
}

Matrix3 read_mat3(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw ModelError(fmt::format("{}: expected a 3x3 nested array", path));
  Matrix3 m;
  for (int r = 0; r < 3; ++r) m.row(r) = read_vec3(j[r], fmt::format("{}[{}]", path, r)).transpose();
  return m;
}

Json vec3_json(const Vector3& v) { return Json::array({v(0), v(1), v(2)}); }

Json mat3_json(const Matrix3& m) {
  Json rows = Json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(vec3_json(m.row(r).transpose()));
  return rows;
}

Json dh_json(const DHRow& row) {
  Json j;
  j["a_prev_m"] = row.a_prev;
  j["alpha_prev_rad"] = row.alpha_prev;
  j["d_m"] = row.d;
  j["theta_offset_rad"] = row.theta_offset;
  return j;
}

DHRow read_dh(const Json& j, const std::string& path) {
  DHRow row;
  row.a_prev = read_number(j, "a_prev_m", path);
  row.alpha_prev = read_number(j, "alpha_prev_rad", path);
  row.d = read_number(j, "d_m", path);
  row.theta_offset = read_number(j, "theta_offset_rad", path);
  return row;
}

const Json& require_array(const Json& j, const char* key, std::size_t size) {
  const Json& arr = require(j, key, "model");
  if (!arr.is_array() || arr.size() != size)
    throw ModelError(fmt::format("model.{}: expected an array of {} entries", key, size));
  return arr;
}

}  // namespace

double RobotModel::total_mass() const {
  double total = 0.0;
  for (const auto& link : links) total += link.mass;
  return total;
}

Vector6 RobotModel::damping() const {
  Vector6 beta;
  for (int i = 0; i < kNumJoints; ++i) beta(i) = motors[i].beta;
  return beta;
}

std::vector<std::string> validate_model(const RobotModel& m) {
  std::vector<std::string> out;
  for (int i = 0; i < kNumJoints; ++i) {
    const LinkParams& link = m.links[i];
    if (!(link.mass > 0.0) || !std::isfinite(link.mass))
      out.push_back(fmt::format("{} must be > 0 (observed {})", link_field(i, "mass"), link.mass));
    if (!link.com_offset.allFinite()) out.push_back(link_field(i, "com_offset") + " must be finite");
    check_inertia(link.inertia, i, out);
  }
  for (int i = 0; i < kNumJoints; ++i) check_dh_row(m.dh_table[i], fmt::format("dh_table[{}]", i + 1), out);
  if (m.stance_row) check_dh_row(*m.stance_row, "stance_row", out);
  if (!std::isfinite(m.stance_angle))
    out.push_back(fmt::format("stance_angle must be finite (observed {})", m.stance_angle));

  for (int i = 0; i < kNumJoints; ++i) {
    const MotorParams& p = m.motors[i];
    const auto field = [i](const char* name) { return fmt::format("motors[{}].{}", i + 1, name); };
    const auto positive = [&](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v)) out.push_back(fmt::format("{} must be > 0 (observed {})", field(name), v));
    };
    positive(p.Ra, "Ra");
    positive(p.La, "La");
    positive(p.k_phi, "k_phi");
    positive(p.rated_power, "rated_power");
    if (!(p.Kr >= 1.0) || !std::isfinite(p.Kr))
      out.push_back(fmt::format("{} must be >= 1 (observed {})", field("Kr"), p.Kr));
    if (!(p.beta >= 0.0) || !std::isfinite(p.beta))
      out.push_back(fmt::format("{} must be >= 0 (observed {})", field("beta"), p.beta));
  }

  if (!(m.gravity >= 0.0) || !std::isfinite(m.gravity))
    out.push_back(fmt::format("gravity must be finite and >= 0 (observed {})", m.gravity));

  const Matrix3& r = m.base_frame.rotation;
  if (!r.allFinite() || !m.base_frame.translation.allFinite()) {
    out.push_back("base_frame must be finite");
  } else {
    const double ortho = (r.transpose() * r - Matrix3::Identity()).cwiseAbs().maxCoeff();
    if (ortho > 1e-10 || std::abs(r.determinant() - 1.0) > 1e-10)
      out.push_back(fmt::format("base_frame.rotation must be a proper rotation (|R^T R - I| = {}, det = {})", ortho,
                                r.determinant()));
  }

  const double total = m.total_mass();
  if (!(total > 0.0)) out.push_back(fmt::format("total mass must be > 0 (observed {})", total));
  return out;
}

std::string serialize_model(const RobotModel& m) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["name"] = m.name;
  j["note"] = m.note;
  j["gravity_mps2"] = m.gravity;

  Json base;
  base["rotation"] = mat3_json(m.base_frame.rotation);
  base["translation_m"] = vec3_json(m.base_frame.translation);
  j["base_frame"] = base;
  j["stance_row"] = m.stance_row ? dh_json(*m.stance_row) : Json(nullptr);
  j["stance_angle_rad"] = m.stance_angle;

  Json links = Json::array();
  for (int i = 0; i < kNumJoints; ++i) {
    Json l;
    l["name"] = std::string(1, kBodyNames[i]);
    l["mass_kg"] = m.links[i].mass;
    l["com_offset_m"] = vec3_json(m.links[i].com_offset);
    l["inertia_kgm2"] = mat3_json(m.links[i].inertia);
    links.push_back(l);
  }
  j["links"] = links;

  Json dh = Json::array();
  for (const auto& row : m.dh_table) dh.push_back(dh_json(row));
  j["dh_table"] = dh;

  Json motors = Json::array();
  for (const auto& p : m.motors) {
    Json mj;
    mj["Ra_ohm"] = p.Ra;
    mj["La_H"] = p.La;
    mj["k_phi_Vs_per_rad"] = p.k_phi;
    mj["Kr"] = p.Kr;
    mj["beta_Nms_per_rad"] = p.beta;
    mj["rated_power_W"] = p.rated_power;
    motors.push_back(mj);
  }
  j["motors"] = motors;
  return j.dump(2) + "\n";
}

RobotModel parse_model(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ModelError(fmt::format("model parse error: {}", e.what()));
  }

  const Json& schema = require(j, "schema", "model");
  if (!schema.is_number_integer() || schema.get<int>() != kSchemaVersion)
    throw ModelError(fmt::format("model.schema: unsupported schema (expected {})", kSchemaVersion));

  RobotModel m;
  if (const auto it = j.find("name"); it != j.end() && it->is_string()) m.name = it->get<std::string>();
  if (const auto it = j.find("note"); it != j.end() && it->is_string()) m.note = it->get<std::string>();
  m.gravity = read_number(j, "gravity_mps2", "model");

  const Json& base = require(j, "base_frame", "model");
  m.base_frame.rotation = read_mat3(require(base, "rotation", "model.base_frame"), "model.base_frame.rotation");
  m.base_frame.translation =
      read_vec3(require(base, "translation_m", "model.base_frame"), "model.base_frame.translation_m");

  if (const auto it = j.find("stance_row"); it != j.end() && !it->is_null())
    m.stance_row = read_dh(*it, "model.stance_row");
  if (const auto it = j.find("stance_angle_rad"); it != j.end())
    m.stance_angle = read_number(*it, "model.stance_angle_rad");

  const Json& links = require_array(j, "links", kNumJoints);
  for (int i = 0; i < kNumJoints; ++i) {
    const std::string path = fmt::format("links[{}]", kBodyNames[i]);
    LinkParams& l = m.links[i];
    l.mass = read_number(links[i], "mass_kg", path);
    l.com_offset = read_vec3(require(links[i], "com_offset_m", path), path + ".com_offset_m");
    l.inertia = read_mat3(require(links[i], "inertia_kgm2", path), path + ".inertia_kgm2");
  }

  const Json& dh = require_array(j, "dh_table", kNumJoints);
  for (int i = 0; i < kNumJoints; ++i) m.dh_table[i] = read_dh(dh[i], fmt::format("dh_table[{}]", i + 1));

  const Json& motors = require_array(j, "motors", kNumJoints);
  for (int i = 0; i < kNumJoints; ++i) {
    const std::string path = fmt::format("motors[{}]", i + 1);
    MotorParams& p = m.motors[i];
    p.Ra = read_number(motors[i], "Ra_ohm", path);
    p.La = read_number(motors[i], "La_H", path);
    p.k_phi = read_number(motors[i], "k_phi_Vs_per_rad", path);
    p.Kr = read_number(motors[i], "Kr", path);
    p.beta = read_number(motors[i], "beta_Nms_per_rad", path);
    p.rated_power = read_number(motors[i], "rated_power_W", path);
  }

  const auto violations = validate_model(m);
  if (!violations.empty()) {
    std::string msg = "invalid model:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ModelError(msg);
  }
  return m;
}

RobotModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError(fmt::format("cannot open model file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

void save_model(const RobotModel& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError(fmt::format("cannot write model file '{}'", path.string()));
  out << serialize_model(m);
  if (!out) throw ModelError(fmt::format("write failed for '{}'", path.string()));
}

RobotModel scale_mass(const RobotModel& m, double factor) {
  RobotModel scaled = m;
  for (auto& link : scaled.links) {
    link.mass *= factor;
    link.inertia *= factor;
  }
  return scaled;
}

}  // namespace blue
