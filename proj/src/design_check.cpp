#include "blue/design_check.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "blue/actuation.hpp"

namespace blue::design {

namespace {

// clang-format off
constexpr std::array<SpeedTorqueRow, 10> kPublishedTable{{
    { 29, 11.48, 21.75, 2.63, 6.66, 3.51},
    { 37, 14.57, 27.75, 2.06, 5.24, 2.75},
    { 45, 17.72, 33.75, 1.69, 4.31, 2.26},
    { 51, 20.08, 38.25, 1.49, 3.80, 1.99},
    { 67, 26.38, 50.25, 1.14, 2.89, 1.52},
    { 74, 29.14, 55.50, 1.03, 2.62, 1.37},
    { 81, 31.89, 60.75, 0.94, 2.40, 1.26},
    { 98, 38.58, 73.50, 0.78, 1.98, 1.04},
    {107, 42.13, 80.25, 0.71, 1.81, 0.95},
    {121, 47.64, 90.75, 0.63, 1.60, 0.84},
}};
// clang-format on

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw DesignError(fmt::format("{} must be > 0 (got {})", name, v));
}

}  // namespace

std::vector<SpeedTorqueRow> speed_torque_table(std::span<const double> speeds_rpm, double power_W, double r1,
                                               double r2) {
  std::array<BeltStage, 2> stages;
  stages[0].ratio = r1;
  stages[1].ratio = r2;
  std::vector<SpeedTorqueRow> rows;
  rows.reserve(speeds_rpm.size());
  for (const double w : speeds_rpm) {
    require_positive(w, "input speed");
    const TransmissionSpeeds sp = transmission_speeds(stages, w);
    const TransmissionTorques tq = transmission_torques(power_W, sp.axle_rpm, sp.out_rpm);
    rows.push_back({w, sp.out_rpm, sp.axle_rpm, torque_at_speed(power_W, w), tq.out_Nm, tq.axle_Nm});
  }
  return rows;
}

std::span<const SpeedTorqueRow> published_speed_torque_table() { return kPublishedTable; }

std::vector<double> published_input_speeds() {
  std::vector<double> speeds;
  for (const auto& row : kPublishedTable) speeds.push_back(row.in_rpm);
  return speeds;
}

double asme_elliptic_utilization(double Sa, double Sm, double Se, double Sy) {
  require_positive(Se, "Se");
  require_positive(Sy, "Sy");
  const double a = Sa / Se;
  const double m = Sm / Sy;
  return a * a + m * m;
}

ShaftCapacityTerms internal_shaft_torque_terms(const StressInputs& in) {
  const ShaftSection& s = in.section;
  require_positive(in.Se, "Se");
  require_positive(in.fs, "fs");
  require_positive(in.Kf_tors, "k_ft");
  if (!(s.D > s.d && s.d >= 0.0))
    throw DesignError(fmt::format("shaft section needs D > d >= 0 (got D={}, d={})", s.D, s.d));

  const double d4 = std::pow(s.D, 4) - std::pow(s.d, 4);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  ShaftCapacityTerms t;
  t.section_term = pi2 * d4 * d4 * in.Se * in.Se / (in.fs * in.fs * s.D * s.D);
  const double m = 32.0 * in.Kf_bend * in.Ma;
  t.moment_term = m * m;
  t.radicand = (t.section_term - t.moment_term) / (768.0 * in.Kf_tors);
  if (t.radicand < 0.0)
    throw DesignError(fmt::format("moment-dominated failure: bending alone exceeds the ASME-elliptic boundary "
                                  "(radicand {})",
                                  t.radicand));
  t.torque = std::sqrt(t.radicand);
  return t;
}

double internal_shaft_torque_capacity(const StressInputs& in) { return internal_shaft_torque_terms(in).torque; }

double base_force_limit(double Se, double fs, double moment_arm, double section_modulus, double Kf) {
  require_positive(Se, "Se");
  require_positive(fs, "fs");
  require_positive(moment_arm, "moment arm");
  require_positive(section_modulus, "section modulus");
  require_positive(Kf, "Kf");
  return (Se / fs) * section_modulus / (moment_arm * Kf);
}

double base_force_limit(const BaseLoadCase& c) {
  return base_force_limit(c.Se, c.fs, c.moment_arm, c.section_modulus, c.Kf);
}

double base_stress_ratio(const BaseLoadCase& c, double F) {
  const double sigma = F * c.moment_arm / c.section_modulus * c.Kf;
  return sigma * sigma / (c.Se * c.Se);
}

double femur_force_limit(double Se, double fs, double axial_force, double area, double c, double I) {
  require_positive(Se, "Se");
  require_positive(fs, "fs");
  require_positive(area, "area");
  require_positive(c, "c");
  require_positive(I, "I");
  const double allowable = Se / fs;
  const double axial_stress = axial_force / area;
  const double margin = allowable - axial_stress;
  // Rounding noise at the boundary counts as zero capacity, not as failure.
  if (margin < -1e-12 * allowable)
    throw DesignError(fmt::format("axial stress alone exceeds allowable ({} Pa > {} Pa)", axial_stress, allowable));
  return std::max(margin, 0.0) * I / c;
}

double femur_force_limit(const FemurLoadCase& c) {
  return femur_force_limit(c.Se, c.fs, c.axial_force, c.area, c.c, c.I);
}

double femur_stress(const FemurLoadCase& c, double F) { return c.axial_force / c.area + F * c.c / c.I; }

}  // namespace blue::design
