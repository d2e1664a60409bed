#pragma once

// Zero-temperature classical ensemble of planar rotors under delta kicks.
//
// Each rotor starts at rest at angle theta0 drawn from the isotropic measure
// (1/2) sin(theta0) d(theta0). Kicks change only the angular velocity:
//   symmetric:  omega -= P_s sin(2 theta)
//   asymmetric: omega -= P_a sin(theta)
// Angles are kept on the real line; no wrapping.

#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "orient/core_types.hpp"

namespace orient::classical {

class ClassicalError : public std::runtime_error {
 public:
  enum class Code { InvalidNodeCount, ConvergenceFailure };
  ClassicalError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

struct ClassicalEnsemble {
  std::vector<double> theta0;
  std::vector<double> weight;  // sums to 1

  std::size_t size() const noexcept { return theta0.size(); }
};

// Gauss-Legendre in u = cos(theta0); weights halved so they sum to one.
// Above 2048 nodes a composite rule of 32-point panels is used and the node
// count is rounded up to a multiple of 32.
ClassicalEnsemble make_ensemble(int n_nodes);

// Process-wide cache of make_ensemble results; safe to call concurrently.
std::shared_ptr<const ClassicalEnsemble> cached_ensemble(int n_nodes);

struct ClassicalState {
  std::vector<double> theta;
  std::vector<double> omega;
};

ClassicalState initial_state(const ClassicalEnsemble& ens);
void apply_kick(ClassicalState& state, KickKind kind, double strength);
void free_flight(ClassicalState& state, double dt);

// Weighted average of cos^k(theta + omega * dt) over the ensemble.
double ensemble_average(const ClassicalEnsemble& ens, const ClassicalState& state, int k, double dt = 0.0);

// Kicks applied in list order with a signed free flight before each one. This
// is the analytically continued model: negative flights run the free motion
// backwards, which is how the revival domain is represented classically.
struct ChainStep {
  double flight = 0.0;
  KickKind kind = KickKind::Symmetric;
  double strength = 0.0;
};

ClassicalState run_chain(const ClassicalEnsemble& ens, std::span<const ChainStep> steps);

// Physical: state at t has had every kick with time <= t.
// Extended: all kicks are applied, then the final free flight is evaluated at
// signed (t - last kick time) for every t, including times before the kicks.
enum class TimeDomain { Physical, Extended };

std::vector<ClassicalState> propagate_classical(const PulseSequence& seq, const ClassicalEnsemble& ens,
                                                std::span<const double> t_eval,
                                                TimeDomain domain = TimeDomain::Physical);

// Node count rule: max(64, ceil(8 * sum|P| * time span)).
int default_node_count(const PulseSequence& seq, std::span<const double> t_eval);

struct ObservableOptions {
  int n_nodes = 0;  // 0 selects default_node_count
  double tolerance = 1e-6;
  int max_nodes = 1 << 20;
  TimeDomain domain = TimeDomain::Physical;
};

// <cos^k theta>(t), doubling the node count until successive results agree
// within `tolerance` at every time.
ObservableSeries classical_observable(const PulseSequence& seq, int k, std::span<const double> t_eval,
                                      const ObservableOptions& opts = {});

}  // namespace orient::classical
