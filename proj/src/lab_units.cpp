#include "orient/lab_units.hpp"

#include <cmath>
#include <stdexcept>

#include "orient/core_types.hpp"

namespace orient::units {

using namespace constants;

void validate(const MoleculeParams& mol) {
  if (!(mol.dipole_debye >= 0.0)) throw std::invalid_argument("dipole moment must be non-negative");
  if (!(mol.revival_time_ps > 0.0)) throw std::invalid_argument("revival time must be positive");
  if (!std::isfinite(mol.anisotropy_a3)) throw std::invalid_argument("anisotropy must be finite");
}

void validate(const LabPulse& pulse) {
  if (!(pulse.amplitude >= 0.0) || !std::isfinite(pulse.amplitude))
    throw std::invalid_argument("pulse amplitude must be non-negative");
  if (!(pulse.duration_ps > 0.0)) throw std::invalid_argument("pulse duration must be positive");
}

double kick_strength(const MoleculeParams& mol, const LabPulse& pulse) {
  validate(mol);
  validate(pulse);
  const double sigma = pulse.duration_ps * kPicosecond;
  const double gaussian_area = sigma * std::sqrt(kPi);  // Int exp(-t^2/sigma^2) dt
  if (pulse.kind == LabPulseKind::HalfCycle) {
    const double field = pulse.amplitude * kKilovoltPerCm;
    return mol.dipole_debye * kDebye * field * gaussian_area / kHbar;
  }
  // I = E^2 / (2 Z0) for the cycle-averaged intensity of the envelope E.
  const double intensity = pulse.amplitude * kWattPerCm2;
  const double field_sq_integral = 2.0 * kVacuumImpedance * intensity * gaussian_area;
  const double alpha_si = 4.0 * kPi * kEpsilon0 * mol.anisotropy_a3 * kAngstrom3;
  return alpha_si * field_sq_integral / (4.0 * kHbar);
}

double time_to_dimensionless(const MoleculeParams& mol, double t_ps) {
  validate(mol);
  return kRevivalPeriod * t_ps / mol.revival_time_ps;
}

double time_from_dimensionless(const MoleculeParams& mol, double t) {
  validate(mol);
  return t * mol.revival_time_ps / kRevivalPeriod;
}

bool exceeds_impulsive_limit(const MoleculeParams& mol, const LabPulse& pulse) {
  return pulse.duration_ps > 0.05 * mol.revival_time_ps;
}

MoleculeParams kcl() { return {10.3, 3.1, 128.0}; }

}  // namespace orient::units
