#include <cmath>
#include <numbers>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "blue/design_check.hpp"
#include "support.hpp"

using namespace blue::design;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

ShaftSection hollow(double D, double d) {
  ShaftSection s;
  s.D = D;
  s.d = d;
  return s;
}

StressInputs sample_shaft() {
  StressInputs in;
  in.Se = 180e6;
  in.Sy = 300e6;
  in.fs = 2;
  in.Kf_bend = 1.5;
  in.Kf_tors = 1.5;
  in.Ma = 2;
  in.section = hollow(0.020, 0.010);
  return in;
}

/// Shaft capacity in 50-digit binary floating point, written out from the
/// formula rather than calling into the library.
double shaft_capacity_multiprecision(const StressInputs& in) {
  using big = boost::multiprecision::cpp_bin_float_50;
  const big pi = boost::math::constants::pi<big>();
  const big D = in.section.D, d = in.section.d, Se = in.Se, fs = in.fs;
  const big d4 = D * D * D * D - d * d * d * d;
  const big moment = big(32) * big(in.Kf_bend) * big(in.Ma);
  const big r = (pi * pi * d4 * d4 * Se * Se / (fs * fs * D * D) - moment * moment) / (big(768) * big(in.Kf_tors));
  return static_cast<double>(sqrt(r));
}

}  // namespace

TEST(SpeedTorqueTable, PublishedSpotRows) {
  const double speeds[] = {51.0, 121.0};
  const auto rows = speed_torque_table(speeds, 8.0, 0.75, 0.525);
  const double want[2][5] = {{20.08, 38.25, 1.49, 3.80, 1.99}, {47.64, 90.75, 0.63, 1.60, 0.84}};
  for (int i = 0; i < 2; ++i) {
    const double got[5] = {rows[i].out_rpm, rows[i].axle_rpm, rows[i].tau_in, rows[i].tau_out, rows[i].tau_axle};
    for (int k = 0; k < 5; ++k) EXPECT_LE(rel(got[k], want[i][k]), 0.01) << "row " << i << " col " << k;
  }
}

TEST(SpeedTorqueTable, AllFiftyCellsWithinOnePercent) {
  const auto speeds = published_input_speeds();
  ASSERT_EQ(speeds.size(), 10u);
  const auto rows = speed_torque_table(speeds, kActuatorPower_W, 0.75, 0.525);
  const auto pub = published_speed_torque_table();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].in_rpm, pub[i].in_rpm);
    EXPECT_LE(rel(rows[i].out_rpm, pub[i].out_rpm), 0.01) << i;
    EXPECT_LE(rel(rows[i].axle_rpm, pub[i].axle_rpm), 0.01) << i;
    EXPECT_LE(rel(rows[i].tau_in, pub[i].tau_in), 0.01) << i;
    EXPECT_LE(rel(rows[i].tau_out, pub[i].tau_out), 0.01) << i;
    EXPECT_LE(rel(rows[i].tau_axle, pub[i].tau_axle), 0.01) << i;
  }
}

TEST(SpeedTorqueTable, PublishedCellsCarryConstantPower) {
  // Every published torque times its own speed gives roughly the same power.
  const double to_rad = 2 * std::numbers::pi / 60;
  for (const auto& row : published_speed_torque_table()) {
    EXPECT_LE(rel(row.tau_in * row.in_rpm * to_rad, 8.0), 0.01) << row.in_rpm;
    EXPECT_LE(rel(row.tau_out * row.out_rpm * to_rad, 8.0), 0.01) << row.in_rpm;
    EXPECT_LE(rel(row.tau_axle * row.axle_rpm * to_rad, 8.0), 0.01) << row.in_rpm;
  }
}

TEST(Elliptic, Examples) {
  EXPECT_EQ(asme_elliptic_utilization(0, 0, 1e8, 2e8), 0.0);
  EXPECT_EQ(asme_elliptic_utilization(1e8, 0, 1e8, 2e8), 1.0);
  EXPECT_NEAR(asme_elliptic_utilization(0.6e8, 0.8 * 2e8, 1e8, 2e8), 1.0, 1e-15);
}

TEST(Elliptic, MonotoneInBothStresses) {
  std::mt19937_64 rng(31);
  for (int n = 0; n < 500; ++n) {
    const double Se = blue::oracle::uniform(rng, 1e7, 1e9), Sy = blue::oracle::uniform(rng, 1e7, 1e9);
    const double Sa = blue::oracle::uniform(rng, -1e9, 1e9), Sm = blue::oracle::uniform(rng, -1e9, 1e9);
    const double u = asme_elliptic_utilization(Sa, Sm, Se, Sy);
    const double grow = blue::oracle::uniform(rng, 1.0, 2.0);
    EXPECT_GE(asme_elliptic_utilization(Sa * grow, Sm, Se, Sy), u);
    EXPECT_GE(asme_elliptic_utilization(Sa, Sm * grow, Se, Sy), u);
  }
}

TEST(ShaftCapacity, SampleAgainstArbitraryPrecision) {
  const StressInputs in = sample_shaft();
  const double got = internal_shaft_torque_capacity(in);
  EXPECT_NEAR(got, shaft_capacity_multiprecision(in), 1e-12 * got);
  // 50-digit evaluation, frozen.
  EXPECT_NEAR(got, 62.41398598803977, 1e-12 * got);
}

TEST(ShaftCapacity, SolidShaftMatchesSeparateFormula) {
  StressInputs in;
  in.Se = 100e6;
  in.Sy = 200e6;
  in.fs = 2;
  in.Kf_bend = 1.3;
  in.Kf_tors = 1.7;
  in.Ma = 0.5;
  in.section = hollow(0.012, 0.0);
  // Solid section: (D^4)^2 / D^2 = D^6.
  const double pi = std::numbers::pi, D = 0.012;
  const double solid = std::sqrt((pi * pi * std::pow(D, 6) * in.Se * in.Se / (in.fs * in.fs) -
                                  std::pow(32 * in.Kf_bend * in.Ma, 2)) /
                                 (768 * in.Kf_tors));
  EXPECT_NEAR(internal_shaft_torque_capacity(in), solid, 1e-12 * solid);
  EXPECT_NEAR(solid, 7.489962752018245, 1e-12 * solid);
}

TEST(ShaftCapacity, ZeroOnTheBendingBoundary) {
  StressInputs in = sample_shaft();
  const ShaftCapacityTerms t0 = internal_shaft_torque_terms(in);
  in.Ma = std::sqrt(t0.section_term) / (32 * in.Kf_bend);
  const ShaftCapacityTerms t = internal_shaft_torque_terms(in);
  EXPECT_LE(t.torque, 1e-6 * t0.torque);
}

TEST(ShaftCapacity, MomentDominatedFailure) {
  StressInputs in = sample_shaft();
  in.Ma = 1e4;
  try {
    internal_shaft_torque_capacity(in);
    FAIL() << "expected DesignError";
  } catch (const DesignError& ex) {
    EXPECT_NE(std::string(ex.what()).find("moment-dominated failure"), std::string::npos);
  }
}

TEST(ShaftCapacity, ReferenceDiameters) {
  EXPECT_EQ(kTransmissionShaftD1, 6.0e-3);
  EXPECT_EQ(kTransmissionShaftD2, 7.6e-3);
}

TEST(BaseForce, PublishedConstants) {
  const BaseLoadCase c{};
  const double F = base_force_limit(c);
  EXPECT_LE(rel(F, 8.15), 0.02);
  EXPECT_NEAR(F, 8.050293213265977, 1e-12);  // exact rational recomputation
  EXPECT_LE(rel(base_stress_ratio(c, F), 1.0 / (c.fs * c.fs)), 1e-9);
}

TEST(BaseForce, Scaling) {
  const BaseLoadCase c{};
  const double F = base_force_limit(c);
  EXPECT_NEAR(base_force_limit(2 * c.Se, c.fs, c.moment_arm, c.section_modulus, c.Kf), 2 * F, 1e-12 * F);
  const double k1 = base_force_limit(c.Se, c.fs, c.moment_arm, c.section_modulus, 1.0);
  const double k2 = base_force_limit(c.Se, c.fs, c.moment_arm, c.section_modulus, 2.0);
  EXPECT_NEAR(k2, 0.5 * k1, 1e-12 * k1);
}

TEST(FemurForce, PublishedConstants) {
  const FemurLoadCase c{};
  const double F = femur_force_limit(c);
  EXPECT_LE(rel(F, 113.80), 0.01);
  EXPECT_NEAR(F, 113.49683114035088, 1e-10);  // exact rational recomputation
  EXPECT_LE(rel(femur_stress(c, F), c.Se / c.fs), 1e-9);
}

TEST(FemurForce, BoundaryAndPureBending) {
  FemurLoadCase c{};
  c.axial_force = c.Se * c.area / c.fs;
  EXPECT_NEAR(femur_force_limit(c), 0.0, 1e-9);
  c.axial_force = 0.0;
  EXPECT_NEAR(femur_force_limit(c), (c.Se / c.fs) * c.I / c.c, 1e-12);
}

TEST(FemurForce, AxialOverloadRaises) {
  FemurLoadCase c{};
  c.axial_force = 2 * c.Se * c.area / c.fs;
  EXPECT_THROW(femur_force_limit(c), DesignError);
}
