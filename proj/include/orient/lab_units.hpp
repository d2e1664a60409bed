#pragma once

// Conversion from laboratory pulse and molecule parameters to dimensionless
// kick strengths and times. All constants are CODATA 2018 SI values.

#include <string>

namespace orient::units {

namespace constants {
inline constexpr double kHbar = 1.054571817e-34;          // J s
inline constexpr double kDebye = 3.33564095198152e-30;    // C m
inline constexpr double kEpsilon0 = 8.8541878128e-12;     // F / m
inline constexpr double kVacuumImpedance = 376.730313668;  // ohm
inline constexpr double kAngstrom3 = 1e-30;               // m^3
inline constexpr double kPicosecond = 1e-12;              // s
inline constexpr double kKilovoltPerCm = 1e5;             // V / m
inline constexpr double kWattPerCm2 = 1e4;                // W / m^2
}  // namespace constants

struct MoleculeParams {
  double dipole_debye = 0.0;
  double anisotropy_a3 = 0.0;  // alpha_par - alpha_perp as a polarizability volume; may be negative
  double revival_time_ps = 0.0;
};

enum class LabPulseKind { HalfCycle, Laser };

// HalfCycle: Gaussian unidirectional lobe, peak field in kV/cm.
// Laser: Gaussian intensity envelope, peak intensity in W/cm^2.
// Duration is the 1/e half-width of the lobe (HCP) or of the intensity (laser).
struct LabPulse {
  LabPulseKind kind = LabPulseKind::HalfCycle;
  double amplitude = 0.0;
  double duration_ps = 0.0;
};

void validate(const MoleculeParams& mol);
void validate(const LabPulse& pulse);

// P_a = mu/hbar * Int E dt  or  P_s = (alpha_par - alpha_perp)/(4 hbar) * Int E^2 dt.
double kick_strength(const MoleculeParams& mol, const LabPulse& pulse);

double time_to_dimensionless(const MoleculeParams& mol, double t_ps);
double time_from_dimensionless(const MoleculeParams& mol, double t);

// True when the pulse is too long for the impulsive approximation (> 5% of the revival time).
bool exceeds_impulsive_limit(const MoleculeParams& mol, const LabPulse& pulse);

MoleculeParams kcl();

}  // namespace orient::units
