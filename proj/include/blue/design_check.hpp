#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace blue::design {

struct DesignError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- actuator speed / torque table ------------------------------------------

struct SpeedTorqueRow {
  double in_rpm = 0.0;
  double out_rpm = 0.0;
  double axle_rpm = 0.0;
  double tau_in = 0.0;    // N m
  double tau_out = 0.0;   // N m
  double tau_axle = 0.0;  // N m
};

/// Constant-power propagation through both belt stages.
std::vector<SpeedTorqueRow> speed_torque_table(std::span<const double> speeds_rpm, double power_W, double r1,
                                               double r2);

/// Published values for the BLUE actuator, in table order.
std::span<const SpeedTorqueRow> published_speed_torque_table();

/// Input speeds of the published table.
std::vector<double> published_input_speeds();

inline constexpr double kActuatorPower_W = 8.0;

// ---- shafts ----------------------------------------------------------------

struct ShaftSection {
  double D = 0.0;     // outer diameter, m
  double d = 0.0;     // inner diameter, m
  double area = 0.0;  // m^2
  double c = 0.0;     // m
  double I = 0.0;     // m^4
};

struct StressInputs {
  double Se = 0.0;  // endurance limit, Pa
  double Sy = 0.0;  // yield strength, Pa
  double fs = 1.0;
  double Kf_bend = 1.0;  // k_ff
  double Kf_tors = 1.0;  // k_ft
  double Ma = 0.0;       // alternating moment, N m
  ShaftSection section{};
};

/// (Sa/Se)^2 + (Sm/Sy)^2; a section passes when this is <= 1.
double asme_elliptic_utilization(double Sa, double Sm, double Se, double Sy);

struct ShaftCapacityTerms {
  double section_term = 0.0;  // pi^2 (D^4 - d^4)^2 Se^2 / (fs^2 D^2)
  double moment_term = 0.0;   // (32 k_ff Ma)^2
  double radicand = 0.0;      // (section_term - moment_term) / (768 k_ft)
  double torque = 0.0;        // N m
};

/// Alternating torque a hollow shaft carries on the ASME-elliptic boundary.
/// Throws DesignError when bending alone already exceeds the boundary.
ShaftCapacityTerms internal_shaft_torque_terms(const StressInputs& in);
double internal_shaft_torque_capacity(const StressInputs& in);

/// Minimum transmission-shaft diameters of the actuator (m); the third shaft matches the first.
inline constexpr double kTransmissionShaftD1 = 6.0e-3;
inline constexpr double kTransmissionShaftD2 = 7.6e-3;

// ---- actuator base ---------------------------------------------------------

struct BaseLoadCase {
  double Se = 64.93e6;
  double fs = 2.0;
  double moment_arm = 1.57;
  double section_modulus = 5.645e-7;
  double Kf = 1.45;
};

/// F such that ((F arm / Z) Kf)^2 / Se^2 = 1 / fs^2.
double base_force_limit(double Se, double fs, double moment_arm, double section_modulus, double Kf);
double base_force_limit(const BaseLoadCase& c);

/// Left-hand side of the base stress equation at force F; equals 1/fs^2 at the limit.
double base_stress_ratio(const BaseLoadCase& c, double F);

// ---- femur -----------------------------------------------------------------

struct FemurLoadCase {
  double Se = 60e6;
  double fs = 2.0;
  double axial_force = 57.5;
  double area = 2.4e-4;
  double c = 190e-5;
  double I = 7.246e-9;
};

/// Bending force at which axial/area + F c / I reaches Se / fs.
double femur_force_limit(double Se, double fs, double axial_force, double area, double c, double I);
double femur_force_limit(const FemurLoadCase& c);

/// Combined tension + bending stress at force F, Pa.
double femur_stress(const FemurLoadCase& c, double F);

}  // namespace blue::design
