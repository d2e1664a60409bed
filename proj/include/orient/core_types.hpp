#pragma once

// Dimensionless data model shared by the classical and quantum engines.
//
// Units: time is measured in I/hbar, so one full rotational revival is 2*pi.
// Kick strengths are dimensionless angular impulses.
//
// Sign convention:
//   Asymmetric (half-cycle) kick, strength P_a: angular velocity increment
//     -P_a sin(theta). Positive P_a orients toward theta = 0.
//   Symmetric (polarizability) kick, strength P_s: increment -P_s sin(2 theta).
//     Positive P_s aligns, negative P_s anti-aligns.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace orient {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kRevivalPeriod = 2.0 * kPi;
inline constexpr double kMaxKickStrength = 1e4;

enum class KickKind { Symmetric, Asymmetric };

struct Kick {
  KickKind kind = KickKind::Symmetric;
  double strength = 0.0;
  double time = 0.0;

  friend bool operator==(const Kick&, const Kick&) = default;
};

class SequenceError : public std::runtime_error {
 public:
  enum class Code { NonFiniteValue, StrengthOutOfRange, TooManyKicksAtSameTime, Parse };

  SequenceError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

// Kicks ordered by time. Equal-time kicks form a hybrid pulse and are applied
// to the same pre-kick state.
struct PulseSequence {
  std::vector<Kick> kicks;

  bool empty() const noexcept { return kicks.empty(); }
  friend bool operator==(const PulseSequence&, const PulseSequence&) = default;
};

// Sorts kicks by time (stable) and checks the invariants. Throws SequenceError.
PulseSequence validate_sequence(PulseSequence seq);

// Text format: one kick per line, `sym|asym <strength> <time>`, '#' starts a comment.
PulseSequence parse_sequence(std::string_view text);
std::string format_sequence(const PulseSequence& seq);

enum class ObservableKind { Orientation, Alignment };

inline ObservableKind observable_for_power(int k) {
  if (k == 1) return ObservableKind::Orientation;
  if (k == 2) return ObservableKind::Alignment;
  throw std::invalid_argument("observable power must be 1 or 2");
}

struct ObservableSeries {
  ObservableKind kind = ObservableKind::Orientation;
  std::vector<double> times;
  std::vector<double> values;
};

enum class Engine { Classical, Quantum };
enum class PulseOrder { LaserFirst, HcpFirst, Simultaneous };
enum class Branch { Prompt, Revival };

struct OptimizationResult {
  double p_a = 0.0;
  double p_s = 0.0;
  double t_1 = 0.0;
  double t_2 = 0.0;
  double objective = 0.0;  // signed <cos theta> at the optimum
  Branch branch = Branch::Prompt;
  PulseOrder order = PulseOrder::LaserFirst;
  Engine engine = Engine::Classical;
  long evaluations = 0;
  bool stagnated = false;
  std::string note;
};

// Builds the two-kick sequence for a scheme. The symmetric kick fires at t = 0
// for LaserFirst, the asymmetric one for HcpFirst; the second kick follows
// after `delay`. Zero-strength kicks are omitted.
PulseSequence make_two_pulse_sequence(PulseOrder order, double p_s, double p_a, double delay);

std::string_view to_string(KickKind kind);
std::string_view to_string(ObservableKind kind);
std::string_view to_string(Engine engine);
std::string_view to_string(PulseOrder order);
std::string_view to_string(Branch branch);

Engine parse_engine(std::string_view s);
PulseOrder parse_order(std::string_view s);
Branch parse_branch(std::string_view s);

}  // namespace orient
