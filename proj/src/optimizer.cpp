#include "orient/optimizer.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <limits>
#include <ostream>
#include <random>

#include "orient/classical.hpp"
#include "orient/quantum.hpp"

namespace orient::optimizer {

namespace {

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

// Natural kick-strength scale of the problem; windows are measured against it.
double strength_scale(double p_a, double p_s) {
  if (p_a != 0.0) return std::abs(p_a);
  if (p_s != 0.0) return std::abs(p_s);
  return 1.0;
}

struct Window {
  double lo = 0.0, hi = 0.0;
  int samples = 0;
};

Window inner_window(const OptimizationProblem& prob, double p_s) {
  const double scale = strength_scale(prob.p_a, p_s);
  const auto& s = prob.settings;
  Window w;
  if (prob.engine == Engine::Classical) {
    const double span = s.window_scale / scale;
    w = prob.branch == Branch::Prompt ? Window{0.0, span, 0} : Window{-span, 0.0, 0};
    w.samples = s.classical_scan_points;
  } else {
    if (prob.branch == Branch::Prompt) {
      w = {0.0, std::min(s.window_scale / scale, kPi), 0};
    } else {
      w = {kRevivalPeriod - s.revival_half_width, kRevivalPeriod, 0};
    }
    const double step = std::min(0.002, 0.05 / (std::abs(p_s) + std::abs(prob.p_a) + 1e-300));
    w.samples = std::max(64, static_cast<int>(std::ceil((w.hi - w.lo) / step)));
  }
  return w;
}

double score_of(const OptimizationProblem& prob, double value) {
  if (prob.sense == ObjectiveSense::MaximizeAbs) return std::abs(value);
  const double direction = sign_of(prob.p_a) * (prob.branch == Branch::Prompt ? 1.0 : -1.0);
  return direction * value;
}

// Maximizes score(f(t)) over the window: dense samples, then golden section
// inside the bracket around the best sample.
InnerOptimum maximize_over_window(const OptimizationProblem& prob, const Window& w,
                                  const std::function<double(double)>& f) {
  const int n = std::max(8, w.samples);
  const double h = (w.hi - w.lo) / n;
  // Samples exclude the endpoint that coincides with the last kick.
  auto sample_time = [&](int i) {
    return prob.branch == Branch::Prompt || prob.engine == Engine::Quantum ? w.lo + h * (i + 1) : w.lo + h * i;
  };
  int best_i = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double sc = score_of(prob, f(sample_time(i)));
    if (sc > best_score) {
      best_score = sc;
      best_i = i;
    }
  }
  double a = std::max(w.lo, sample_time(best_i) - h);
  double b = std::min(w.hi, sample_time(best_i) + h);
  const double tol = 2.5e-7 * (w.hi - w.lo);
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = score_of(prob, f(c)), fd = score_of(prob, f(d));
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = score_of(prob, f(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = score_of(prob, f(d));
    }
  }
  double t_best = 0.5 * (a + b);
  double v_best = f(t_best);
  if (score_of(prob, v_best) < best_score) {
    t_best = sample_time(best_i);
    v_best = f(t_best);
  }
  return {v_best, t_best, score_of(prob, v_best)};
}

std::vector<classical::ChainStep> classical_chain(PulseOrder order, double p_s, double p_a, double t_1) {
  using classical::ChainStep;
  switch (order) {
    case PulseOrder::LaserFirst:
      return {ChainStep{0.0, KickKind::Symmetric, p_s}, ChainStep{t_1, KickKind::Asymmetric, p_a}};
    case PulseOrder::HcpFirst:
      return {ChainStep{0.0, KickKind::Asymmetric, p_a}, ChainStep{t_1, KickKind::Symmetric, p_s}};
    case PulseOrder::Simultaneous:
      return {ChainStep{0.0, KickKind::Symmetric, p_s}, ChainStep{0.0, KickKind::Asymmetric, p_a}};
  }
  return {};
}

int classical_nodes_for(const OptimizationProblem& prob, double p_s, double t_1, const Window& w) {
  if (prob.settings.classical_nodes > 0) return prob.settings.classical_nodes;
  const double reach = std::abs(t_1) + std::max(std::abs(w.lo), std::abs(w.hi));
  const double n = std::ceil(8.0 * (std::abs(p_s) + std::abs(prob.p_a)) * reach);
  return static_cast<int>(std::clamp(n, 64.0, 65536.0));
}

double classical_value(const OptimizationProblem& prob, double p_s, double t_1, double t_2, int nodes) {
  const auto ens = classical::cached_ensemble(nodes);
  const auto chain = classical_chain(prob.order, p_s, prob.p_a, t_1);
  const auto post = classical::run_chain(*ens, chain);
  return classical::ensemble_average(*ens, post, 1, t_2);
}

// Doubles the node count until the value at fixed parameters moves < 1e-6.
double converged_classical_value(const OptimizationProblem& prob, double p_s, double t_1, double t_2, int nodes) {
  double prev = classical_value(prob, p_s, t_1, t_2, nodes);
  while (nodes < (1 << 20)) {
    nodes *= 2;
    const double cur = classical_value(prob, p_s, t_1, t_2, nodes);
    if (std::abs(cur - prev) < 1e-6) return cur;
    prev = cur;
  }
  throw classical::ClassicalError(classical::ClassicalError::Code::ConvergenceFailure,
                                  "objective did not converge below node cap");
}

struct Point {
  std::array<double, 2> u{};  // normalized box coordinates
  double f = 0.0;             // minimized: -score + penalty
};

class Objective {
 public:
  explicit Objective(const OptimizationProblem& prob) : prob_(prob) {}

  int dims() const { return prob_.order == PulseOrder::Simultaneous ? 1 : 2; }

  // Normalized -> (p_s, t_1).
  std::pair<double, double> physical(const std::array<double, 2>& u) const {
    const auto& b = prob_.bounds;
    const double ratio = b.ratio_lo + std::clamp(u[0], 0.0, 1.0) * (b.ratio_hi - b.ratio_lo);
    const double p_s = -ratio * std::abs(prob_.p_a);
    if (dims() == 1) return {p_s, 0.0};
    const double delay = b.delay_lo + std::clamp(u[1], 0.0, 1.0) * (b.delay_hi - b.delay_lo);
    return {p_s, delay / std::abs(p_s)};
  }

  std::array<double, 2> scaled(const std::array<double, 2>& u) const {
    const auto& b = prob_.bounds;
    return {b.ratio_lo + u[0] * (b.ratio_hi - b.ratio_lo),
            dims() == 1 ? 0.0 : b.delay_lo + u[1] * (b.delay_hi - b.delay_lo)};
  }

  std::array<double, 2> normalized(double ratio, double delay) const {
    const auto& b = prob_.bounds;
    const double dr = b.ratio_hi - b.ratio_lo, dd = b.delay_hi - b.delay_lo;
    return {dr > 0 ? (ratio - b.ratio_lo) / dr : 0.0, dims() == 1 || dd <= 0 ? 0.0 : (delay - b.delay_lo) / dd};
  }

  double operator()(const std::array<double, 2>& u) const {
    double penalty = 0.0;
    for (int i = 0; i < dims(); ++i) penalty += std::max(0.0, -u[i]) + std::max(0.0, u[i] - 1.0);
    const auto [p_s, t_1] = physical(u);
    ++evaluations_;
    return -evaluate_objective(prob_, p_s, t_1).score + 10.0 * penalty;
  }

  long evaluations() const { return evaluations_.load(); }

 private:
  const OptimizationProblem& prob_;
  mutable std::atomic<long> evaluations_{0};
};

struct NelderMeadOutcome {
  Point best;
  bool improved = false;
};

NelderMeadOutcome nelder_mead(const Objective& f, const Point& start, double step, int max_iter, double tol) {
  const int d = f.dims();
  std::vector<Point> simplex(d + 1, start);
  for (int i = 0; i < d; ++i) {
    auto& p = simplex[i + 1];
    p.u[i] += (start.u[i] + step <= 1.0) ? step : -step;
    p.f = f(p.u);
  }
  auto diameter = [&] {
    double dmax = 0.0;
    for (int i = 0; i <= d; ++i)
      for (int j = i + 1; j <= d; ++j) {
        const auto a = f.scaled(simplex[i].u), b = f.scaled(simplex[j].u);
        dmax = std::max(dmax, std::hypot(a[0] - b[0], a[1] - b[1]));
      }
    return dmax;
  };
  auto combine = [&](const std::array<double, 2>& centroid, const std::array<double, 2>& worst, double coef) {
    Point p;
    for (int i = 0; i < 2; ++i) p.u[i] = centroid[i] + coef * (worst[i] - centroid[i]);
    p.f = f(p.u);
    return p;
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    std::sort(simplex.begin(), simplex.end(), [](const Point& a, const Point& b) { return a.f < b.f; });
    if (diameter() < tol) break;
    std::array<double, 2> centroid{0.0, 0.0};
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < 2; ++k) centroid[k] += simplex[i].u[k] / d;
    auto& worst = simplex[d];
    const Point reflected = combine(centroid, worst.u, -1.0);
    if (reflected.f < simplex[0].f) {
      const Point expanded = combine(centroid, worst.u, -2.0);
      worst = expanded.f < reflected.f ? expanded : reflected;
    } else if (reflected.f < simplex[d - 1].f) {
      worst = reflected;
    } else {
      const bool outside = reflected.f < worst.f;
      const Point contracted = combine(centroid, outside ? reflected.u : worst.u, 0.5);
      if (contracted.f < std::min(worst.f, reflected.f)) {
        worst = contracted;
      } else {
        for (int i = 1; i <= d; ++i) {
          for (int k = 0; k < 2; ++k) simplex[i].u[k] = simplex[0].u[k] + 0.5 * (simplex[i].u[k] - simplex[0].u[k]);
          simplex[i].f = f(simplex[i].u);
        }
      }
    }
  }
  std::sort(simplex.begin(), simplex.end(), [](const Point& a, const Point& b) { return a.f < b.f; });
  Point best = simplex[0];
  for (int i = 0; i < 2; ++i) best.u[i] = std::clamp(best.u[i], 0.0, 1.0);
  if (best.u != simplex[0].u) best.f = f(best.u);
  return {best, best.f < start.f};
}

}  // namespace

Bounds default_bounds(PulseOrder order) {
  switch (order) {
    case PulseOrder::LaserFirst: return {0.05, 1.0, 0.05, 2.5};
    case PulseOrder::HcpFirst: return {0.1, 3.0, 0.0, 2.0};
    case PulseOrder::Simultaneous: return {0.1, 3.0, 0.0, 0.0};
  }
  return {};
}

OptimizationProblem make_problem(Engine engine, PulseOrder order, double p_a, Branch branch) {
  OptimizationProblem prob;
  prob.engine = engine;
  prob.order = order;
  prob.p_a = p_a;
  prob.branch = branch;
  prob.bounds = default_bounds(order);
  return prob;
}

InnerOptimum evaluate_objective(const OptimizationProblem& prob, double p_s, double t_1) {
  const Window w = inner_window(prob, p_s);
  if (prob.engine == Engine::Classical) {
    const int nodes = classical_nodes_for(prob, p_s, t_1, w);
    const auto ens = classical::cached_ensemble(nodes);
    const auto chain = classical_chain(prob.order, p_s, prob.p_a, t_1);
    const auto post = classical::run_chain(*ens, chain);
    return maximize_over_window(prob, w, [&](double t) { return classical::ensemble_average(*ens, post, 1, t); });
  }
  if (t_1 < 0.0) throw std::invalid_argument("quantum engine needs a non-negative pulse delay");
  const auto seq = make_two_pulse_sequence(prob.order, p_s, prob.p_a, t_1);
  const auto post = quantum::propagate_through(seq, prob.settings.l_max);
  const quantum::ExpectationScanner scan(post.psi, 1);
  return maximize_over_window(prob, w, [&](double t) { return scan(t); });
}

OptimizationResult optimize(const OptimizationProblem& prob) {
  OptimizationResult result;
  result.p_a = prob.p_a;
  result.branch = prob.branch;
  result.order = prob.order;
  result.engine = prob.engine;

  if (prob.p_a == 0.0) {
    result.objective = 0.0;
    result.evaluations = 0;
    result.note = "no orienting kick (p_a = 0): orientation vanishes by symmetry";
    return result;
  }

  const Objective f(prob);
  const int d = f.dims();
  const auto& s = prob.settings;
  const int g = std::max(2, s.grid_per_axis);

  // Coarse grid with seeded jitter inside each cell.
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  std::vector<Point> grid;
  const int gy = d == 2 ? g : 1;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < gy; ++j) {
      Point p;
      p.u[0] = (i + 0.5 + jitter(rng)) / g;
      p.u[1] = d == 2 ? (j + 0.5 + jitter(rng)) / g : 0.0;
      grid.push_back(p);
    }
  for (const auto& [ratio, delay] : prob.warm_starts) {
    Point p;
    p.u = f.normalized(ratio, delay);
    for (auto& x : p.u) x = std::clamp(x, 0.0, 1.0);
    grid.push_back(p);
  }
  for (auto& p : grid) p.f = f(p.u);
  std::vector<Point> starts = grid;
  std::stable_sort(starts.begin(), starts.end(), [](const Point& a, const Point& b) { return a.f < b.f; });
  const std::size_t n_starts = std::min<std::size_t>(starts.size(), static_cast<std::size_t>(std::max(1, s.starts)));
  starts.resize(n_starts);
  // Warm starts always run.
  for (std::size_t k = grid.size() - prob.warm_starts.size(); k < grid.size(); ++k)
    if (std::find_if(starts.begin(), starts.end(), [&](const Point& p) { return p.u == grid[k].u; }) == starts.end())
      starts.push_back(grid[k]);

  std::vector<std::future<NelderMeadOutcome>> runs;
  const double step = 0.5 / g;
  for (const auto& start : starts)
    runs.push_back(std::async(std::launch::async, [&, start] {
      return nelder_mead(f, start, step, s.max_iterations, s.simplex_tolerance);
    }));

  Point best = starts.front();
  bool any_improved = false;
  for (auto& r : runs) {
    const auto outcome = r.get();
    any_improved = any_improved || outcome.improved;
    const auto cand = f.physical(outcome.best.u), cur = f.physical(best.u);
    if (outcome.best.f < best.f || (outcome.best.f == best.f && std::abs(cand.first) < std::abs(cur.first)))
      best = outcome.best;
  }

  const auto [p_s, t_1] = f.physical(best.u);
  const auto inner = evaluate_objective(prob, p_s, t_1);
  result.p_s = p_s;
  result.t_1 = t_1;
  result.t_2 = inner.t_2;
  result.objective = inner.value;
  if (prob.engine == Engine::Classical) {
    const int nodes = classical_nodes_for(prob, p_s, t_1, inner_window(prob, p_s));
    result.objective = converged_classical_value(prob, p_s, t_1, inner.t_2, nodes);
  }
  result.evaluations = f.evaluations() + 1;
  result.stagnated = !any_improved;
  if (result.stagnated) result.note = "no start improved on the coarse grid";
  return result;
}

std::vector<SweepRow> sweep(const OptimizationProblem& tmpl, std::span<const double> p_a_values) {
  std::vector<SweepRow> rows;
  std::vector<std::pair<double, double>> warm;
  for (double p_a : p_a_values) {
    auto prob = tmpl;
    prob.p_a = p_a;
    prob.warm_starts = tmpl.warm_starts;
    prob.warm_starts.insert(prob.warm_starts.end(), warm.begin(), warm.end());
    SweepRow row;
    try {
      row.result = optimize(prob);
      if (p_a != 0.0 && row.result.p_s != 0.0)
        warm = {{std::abs(row.result.p_s) / std::abs(p_a), std::abs(row.result.p_s) * row.result.t_1}};
    } catch (const std::exception& e) {
      row.result.p_a = p_a;
      row.result.branch = prob.branch;
      row.result.order = prob.order;
      row.result.engine = prob.engine;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string csv_row(const OptimizationResult& r, const std::string& error) {
  std::string out;
  auto num = [&](double x) {
    out += format_csv_number(x);
    out += ',';
  };
  num(r.p_a);
  num(r.p_s);
  num(r.t_1);
  num(r.t_2);
  num(r.objective);
  out += std::string(to_string(r.branch)) + ',' + std::string(to_string(r.order)) + ',' +
         std::string(to_string(r.engine)) + ',' + std::to_string(r.evaluations) + ',';
  out += format_csv_number(std::abs(r.p_s) * r.t_1);
  out += ',';
  std::string clean = error;
  std::replace(clean.begin(), clean.end(), ',', ';');
  std::replace(clean.begin(), clean.end(), '\n', ' ');
  out += clean;
  return out;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << kSweepCsvHeader << '\n';
  for (const auto& row : rows) out << csv_row(row.result, row.error) << '\n';
}

}  // namespace orient::optimizer
