#include "orient/classical.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "orient/special_functions.hpp"

namespace orient::classical {

namespace {
// Newton iteration for a single Gauss-Legendre rule is quadratic in the node
// count; larger ensembles switch to 32-point panels.
constexpr int kMaxSingleRule = 2048;
constexpr int kPanelOrder = 32;
}  // namespace

ClassicalEnsemble make_ensemble(int n_nodes) {
  if (n_nodes < 2) throw ClassicalError(ClassicalError::Code::InvalidNodeCount, "need at least 2 quadrature nodes");
  const auto rule = n_nodes <= kMaxSingleRule
                        ? special::gauss_legendre(n_nodes)
                        : special::composite_gauss_legendre((n_nodes + kPanelOrder - 1) / kPanelOrder, kPanelOrder);
  const int n = static_cast<int>(rule.nodes.size());
  ClassicalEnsemble ens;
  ens.theta0.resize(n);
  ens.weight.resize(n);
  for (int i = 0; i < n; ++i) {
    ens.theta0[i] = std::acos(rule.nodes[i]);
    ens.weight[i] = 0.5 * rule.weights[i];
  }
  return ens;
}

std::shared_ptr<const ClassicalEnsemble> cached_ensemble(int n_nodes) {
  static std::shared_mutex mutex;
  static std::map<int, std::shared_ptr<const ClassicalEnsemble>> cache;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(n_nodes); it != cache.end()) return it->second;
  }
  auto ens = std::make_shared<const ClassicalEnsemble>(make_ensemble(n_nodes));
  std::unique_lock lock(mutex);
  return cache.emplace(n_nodes, std::move(ens)).first->second;
}

ClassicalState initial_state(const ClassicalEnsemble& ens) {
  return {ens.theta0, std::vector<double>(ens.size(), 0.0)};
}

void apply_kick(ClassicalState& state, KickKind kind, double strength) {
  if (strength == 0.0) return;
  const std::size_t n = state.theta.size();
  if (kind == KickKind::Symmetric) {
    for (std::size_t i = 0; i < n; ++i) state.omega[i] -= strength * std::sin(2.0 * state.theta[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) state.omega[i] -= strength * std::sin(state.theta[i]);
  }
}

void free_flight(ClassicalState& state, double dt) {
  if (dt == 0.0) return;
  for (std::size_t i = 0; i < state.theta.size(); ++i) state.theta[i] += state.omega[i] * dt;
}

double ensemble_average(const ClassicalEnsemble& ens, const ClassicalState& state, int k, double dt) {
  double sum = 0.0;
  const std::size_t n = ens.size();
  if (k == 1) {
    for (std::size_t i = 0; i < n; ++i) sum += ens.weight[i] * std::cos(state.theta[i] + state.omega[i] * dt);
  } else if (k == 2) {
    for (std::size_t i = 0; i < n; ++i) {
      const double c = std::cos(state.theta[i] + state.omega[i] * dt);
      sum += ens.weight[i] * c * c;
    }
  } else {
    throw std::invalid_argument("observable power must be 1 or 2");
  }
  return sum;
}

ClassicalState run_chain(const ClassicalEnsemble& ens, std::span<const ChainStep> steps) {
  auto state = initial_state(ens);
  for (const auto& step : steps) {
    free_flight(state, step.flight);
    apply_kick(state, step.kind, step.strength);
  }
  return state;
}

std::vector<ClassicalState> propagate_classical(const PulseSequence& seq, const ClassicalEnsemble& ens,
                                                std::span<const double> t_eval, TimeDomain domain) {
  std::vector<ClassicalState> out;
  out.reserve(t_eval.size());
  const auto& kicks = seq.kicks;

  if (domain == TimeDomain::Extended) {
    auto post = initial_state(ens);
    double t_last = 0.0;
    for (std::size_t i = 0; i < kicks.size(); ++i) {
      free_flight(post, i == 0 ? 0.0 : kicks[i].time - t_last);
      apply_kick(post, kicks[i].kind, kicks[i].strength);
      t_last = kicks[i].time;
    }
    for (double t : t_eval) {
      auto s = post;
      if (!kicks.empty()) free_flight(s, t - t_last);
      out.push_back(std::move(s));
    }
    return out;
  }

  // Physical domain: walk the kicks forward, re-evaluating from scratch when a
  // requested time is earlier than the current position.
  auto state = initial_state(ens);
  double t_cur = kicks.empty() ? 0.0 : kicks.front().time;
  std::size_t next = 0;
  auto reset = [&] {
    state = initial_state(ens);
    t_cur = kicks.empty() ? 0.0 : kicks.front().time;
    next = 0;
  };
  for (double t : t_eval) {
    if (next > 0 && t < kicks[next - 1].time) reset();
    while (next < kicks.size() && kicks[next].time <= t) {
      free_flight(state, kicks[next].time - t_cur);
      t_cur = kicks[next].time;
      apply_kick(state, kicks[next].kind, kicks[next].strength);
      ++next;
    }
    auto s = state;
    if (next > 0) free_flight(s, t - t_cur);
    out.push_back(std::move(s));
  }
  return out;
}

int default_node_count(const PulseSequence& seq, std::span<const double> t_eval) {
  double strength = 0.0;
  for (const auto& k : seq.kicks) strength += std::abs(k.strength);
  double span = 0.0;
  if (!seq.empty()) {
    const double t0 = seq.kicks.front().time;
    span = seq.kicks.back().time - t0;
    double reach = 0.0;
    for (double t : t_eval) reach = std::max(reach, std::abs(t - t0));
    span += reach;
  }
  const double n = std::ceil(8.0 * strength * span);
  return static_cast<int>(std::clamp(n, 64.0, static_cast<double>(1 << 20)));
}

ObservableSeries classical_observable(const PulseSequence& seq, int k, std::span<const double> t_eval,
                                      const ObservableOptions& opts) {
  ObservableSeries series;
  series.kind = observable_for_power(k);
  series.times.assign(t_eval.begin(), t_eval.end());

  auto evaluate = [&](int n) {
    const auto ens = cached_ensemble(n);
    const auto states = propagate_classical(seq, *ens, t_eval, opts.domain);
    std::vector<double> v(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) v[i] = ensemble_average(*ens, states[i], k);
    return v;
  };

  int n = opts.n_nodes > 0 ? opts.n_nodes : default_node_count(seq, t_eval);
  auto prev = evaluate(n);
  while (true) {
    if (2 * n > opts.max_nodes)
      throw ClassicalError(ClassicalError::Code::ConvergenceFailure, "quadrature did not converge below node cap");
    n *= 2;
    auto cur = evaluate(n);
    double diff = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) diff = std::max(diff, std::abs(cur[i] - prev[i]));
    prev = std::move(cur);
    if (diff < opts.tolerance) break;
  }
  series.values = std::move(prev);
  return series;
}

}  // namespace orient::classical
