#include "orient/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace orient {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

PulseSequence validate_sequence(PulseSequence seq) {
  for (const auto& k : seq.kicks) {
    if (!std::isfinite(k.strength) || !std::isfinite(k.time))
      throw SequenceError(SequenceError::Code::NonFiniteValue, "kick strength and time must be finite");
    if (std::abs(k.strength) > kMaxKickStrength)
      throw SequenceError(SequenceError::Code::StrengthOutOfRange, "kick strength exceeds 1e4");
  }
  std::stable_sort(seq.kicks.begin(), seq.kicks.end(),
                   [](const Kick& a, const Kick& b) { return a.time < b.time; });
  for (std::size_t i = 0; i < seq.kicks.size();) {
    std::size_t j = i;
    int sym = 0, asym = 0;
    while (j < seq.kicks.size() && seq.kicks[j].time == seq.kicks[i].time) {
      (seq.kicks[j].kind == KickKind::Symmetric ? sym : asym)++;
      ++j;
    }
    if (sym > 1 || asym > 1)
      throw SequenceError(SequenceError::Code::TooManyKicksAtSameTime,
                          "at most one symmetric and one asymmetric kick per instant");
    i = j;
  }
  return seq;
}

PulseSequence parse_sequence(std::string_view text) {
  PulseSequence seq;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string kind, extra;
    Kick kick;
    if (!(fields >> kind >> kick.strength >> kick.time) || (fields >> extra))
      throw SequenceError(SequenceError::Code::Parse,
                          "line " + std::to_string(line_no) + ": expected `sym|asym <strength> <time>`");
    if (kind == "sym")
      kick.kind = KickKind::Symmetric;
    else if (kind == "asym")
      kick.kind = KickKind::Asymmetric;
    else
      throw SequenceError(SequenceError::Code::Parse,
                          "line " + std::to_string(line_no) + ": unknown kick kind '" + kind + "'");
    seq.kicks.push_back(kick);
  }
  return validate_sequence(std::move(seq));
}

std::string format_sequence(const PulseSequence& seq) {
  std::string out;
  for (const auto& k : seq.kicks) {
    out += to_string(k.kind);
    out += ' ';
    out += format_number(k.strength);
    out += ' ';
    out += format_number(k.time);
    out += '\n';
  }
  return out;
}

PulseSequence make_two_pulse_sequence(PulseOrder order, double p_s, double p_a, double delay) {
  PulseSequence seq;
  double t_sym = 0.0, t_asym = 0.0;
  switch (order) {
    case PulseOrder::LaserFirst: t_asym = delay; break;
    case PulseOrder::HcpFirst: t_sym = delay; break;
    case PulseOrder::Simultaneous: break;
  }
  if (p_s != 0.0) seq.kicks.push_back({KickKind::Symmetric, p_s, t_sym});
  if (p_a != 0.0) seq.kicks.push_back({KickKind::Asymmetric, p_a, t_asym});
  return validate_sequence(std::move(seq));
}

std::string_view to_string(KickKind kind) { return kind == KickKind::Symmetric ? "sym" : "asym"; }

std::string_view to_string(ObservableKind kind) {
  return kind == ObservableKind::Orientation ? "orientation" : "alignment";
}

std::string_view to_string(Engine engine) { return engine == Engine::Classical ? "classical" : "quantum"; }

std::string_view to_string(PulseOrder order) {
  switch (order) {
    case PulseOrder::LaserFirst: return "laser-first";
    case PulseOrder::HcpFirst: return "hcp-first";
    case PulseOrder::Simultaneous: return "simultaneous";
  }
  return "?";
}

std::string_view to_string(Branch branch) { return branch == Branch::Prompt ? "prompt" : "revival"; }

Engine parse_engine(std::string_view s) {
  if (s == "classical") return Engine::Classical;
  if (s == "quantum") return Engine::Quantum;
  throw std::invalid_argument("unknown engine '" + std::string(s) + "'");
}

PulseOrder parse_order(std::string_view s) {
  if (s == "laser-first") return PulseOrder::LaserFirst;
  if (s == "hcp-first") return PulseOrder::HcpFirst;
  if (s == "simultaneous") return PulseOrder::Simultaneous;
  throw std::invalid_argument("unknown pulse order '" + std::string(s) + "'");
}

Branch parse_branch(std::string_view s) {
  if (s == "prompt") return Branch::Prompt;
  if (s == "revival") return Branch::Revival;
  throw std::invalid_argument("unknown branch '" + std::string(s) + "'");
}

}  // namespace orient
