#pragma once

// Rigid-rotor wavepacket in the Y_l^0 basis.
//
// psi(theta) = sum_l a_l Y_l^0(theta). Linearly polarized kicks conserve m, so
// only m = 0 amplitudes ever appear. Free evolution multiplies a_l by
// exp(-i l(l+1) t / 2); since l(l+1)/2 is an integer every observable is
// exactly 2*pi periodic.
//
// Kicks are impulsive phase factors exp(i P cos(theta)) and
// exp(i P cos^2(theta)), applied through the eigen-decomposition of the
// truncated cos(theta) matrix. The cos^2 operator is the square of that
// matrix, so both kicks share one set of eigenvectors.

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "orient/core_types.hpp"

namespace orient::quantum {

using Complex = std::complex<double>;

class QuantumError : public std::runtime_error {
 public:
  enum class Code { BasisOverflow, SeriesTruncationFailure, InvalidBasis };
  QuantumError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

inline constexpr int kMinLMax = 4;
inline constexpr int kMaxLMax = 4096;
inline constexpr int kTailWidth = 10;
inline constexpr double kTailTolerance = 1e-10;

class RotorWavefunction {
 public:
  RotorWavefunction() = default;
  explicit RotorWavefunction(Eigen::VectorXcd coeffs);

  int l_max() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const Eigen::VectorXcd& coeffs() const noexcept { return coeffs_; }
  Complex operator[](int l) const { return coeffs_[l]; }

  double norm_squared() const { return coeffs_.squaredNorm(); }
  // Population of the top kTailWidth levels.
  double tail_population() const;
  // Zero-pads to a larger basis; never truncates.
  RotorWavefunction padded(int new_l_max) const;

 private:
  Eigen::VectorXcd coeffs_;
};

// <l|cos(theta)|l+1> for m = 0.
double cos_element(int l);

// Eigen-decomposition of the truncated cos(theta) matrix of size l_max + 1.
struct CosineSpectrum {
  int l_max = 0;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // columns
};

// Shared, thread-safe cache keyed by l_max.
std::shared_ptr<const CosineSpectrum> cosine_spectrum(int l_max);

class KickOperator {
 public:
  KickOperator(KickKind kind, int l_max);

  KickKind kind() const noexcept { return kind_; }
  int l_max() const noexcept { return spectrum_->l_max; }
  // Banded matrix: cos(theta) (bandwidth 1) or its square (bandwidth 2).
  Eigen::MatrixXd matrix() const;
  // Operator eigenvalues: lambda for cos, lambda^2 for cos^2.
  Eigen::VectorXd eigenvalues() const;
  const Eigen::MatrixXd& eigenvectors() const noexcept { return spectrum_->eigenvectors; }
  Eigen::MatrixXd reconstruct() const;

  // exp(i * strength * M) applied to coefficients of matching size.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& coeffs, double strength) const;

 private:
  KickKind kind_;
  std::shared_ptr<const CosineSpectrum> spectrum_;
};

RotorWavefunction ground_state(int l_max);

// Auto-enlarges the basis (doubling) until the post-kick tail population is
// below kTailTolerance. Throws BasisOverflow past kMaxLMax.
RotorWavefunction apply_kick(const RotorWavefunction& psi, KickKind kind, double strength);
inline RotorWavefunction apply_kick(const RotorWavefunction& psi, const Kick& kick) {
  return apply_kick(psi, kick.kind, kick.strength);
}

RotorWavefunction free_propagate(const RotorWavefunction& psi, double dt);

// <cos^k theta> from the exact (untruncated) banded matrix elements.
double expectation(const RotorWavefunction& psi, int k);

// Evaluates <cos^k theta>(dt) for a freely evolving state at many times in O(l_max) each.
class ExpectationScanner {
 public:
  ExpectationScanner(const RotorWavefunction& psi, int k);
  double operator()(double dt) const;

 private:
  int k_;
  double diagonal_ = 0.0;
  std::vector<Complex> products_;  // products_[l] multiplies exp(-i * freq(l) * dt)
};

// Default basis size: ceil(3 * sum|P|) + 20.
int default_l_max(const PulseSequence& seq);

// Runs the kick sequence from the ground state and records <cos^k theta> at
// each requested time. Times before the first kick see the ground state.
ObservableSeries run_sequence(const PulseSequence& seq, std::span<const double> t_eval, int k,
                              int l_max_hint = 0);

// State just after the last kick together with that kick's time.
struct PostKickState {
  RotorWavefunction psi;
  double time = 0.0;
};
PostKickState propagate_through(const PulseSequence& seq, int l_max_hint = 0);

// --- Analytic cross-checks -------------------------------------------------

// c_J for J = 0..j_max after a symmetric kick of the ground state, via the
// Gamma-function / Kummer 1F1 closed form. a_{2J} = c_J / sqrt(4 pi).
std::vector<Complex> symmetric_kick_cj(double p_s, int j_max);

// Rayleigh coefficients i^l sqrt(2l+1) j_l(P) of exp(i P cos theta) Y_0^0.
std::vector<Complex> rayleigh_coefficients(double p_a, int l_max);

// Which coefficient the double sum multiplies. The formula as typeset pairs
// the Bessel index j with c_j; the expansion of the pre-kick wavefunction
// pairs l' with c_{l'}.
enum class DlIndexing { AsPrinted, PreKickCoefficient };

// Coefficients d_l (l = 0..l_max) of the state just after the asymmetric kick
// at t_1 in a laser-first sequence, from the Clebsch-Gordan double sum.
std::vector<Complex> dl_crosscheck(double p_s, double p_a, double t_1, int l_max,
                                   DlIndexing indexing = DlIndexing::PreKickCoefficient);

}  // namespace orient::quantum
