#pragma once

// Orientation maximization over two-pulse schemes.
//
// The anti-aligning kick has p_s = -ratio * |p_a|. The outer search runs in
// scaled coordinates (ratio = |p_s|/|p_a|, delay = |p_s| * t_1), where the
// classical problem is exactly scale-free. For every (p_s, t_1) the inner
// problem scans t_2 over the branch window and refines the best sample by
// golden section.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "orient/core_types.hpp"

namespace orient::optimizer {

enum class ObjectiveSense { MaximizePlus, MaximizeAbs };

struct Bounds {
  double ratio_lo = 0.05, ratio_hi = 1.0;  // |p_s| / |p_a|
  double delay_lo = 0.05, delay_hi = 2.5;  // |p_s| * t_1
};

struct Settings {
  int starts = 8;
  int grid_per_axis = 6;
  int max_iterations = 500;
  double simplex_tolerance = 1e-4;
  std::uint64_t seed = 0;
  double window_scale = 4.0;        // prompt t_2 window is window_scale / |p_a|
  double revival_half_width = 0.5;  // quantum revival window [2pi - w, 2pi)
  int classical_scan_points = 400;
  int classical_nodes = 0;  // 0: per-evaluation default rule
  int l_max = 0;            // 0: default rule
};

struct OptimizationProblem {
  Engine engine = Engine::Classical;
  PulseOrder order = PulseOrder::LaserFirst;
  double p_a = 1.0;
  Branch branch = Branch::Prompt;
  ObjectiveSense sense = ObjectiveSense::MaximizePlus;
  Bounds bounds;
  Settings settings;
  // Extra Nelder-Mead starts in (ratio, delay) coordinates, e.g. a previous optimum.
  std::vector<std::pair<double, double>> warm_starts;
};

Bounds default_bounds(PulseOrder order);
OptimizationProblem make_problem(Engine engine, PulseOrder order, double p_a, Branch branch = Branch::Prompt);

struct InnerOptimum {
  double value = 0.0;  // signed <cos theta>
  double t_2 = 0.0;
  double score = 0.0;  // what the outer search maximizes
};

// Best orientation over t_2 in the branch window for fixed (p_s, t_1).
InnerOptimum evaluate_objective(const OptimizationProblem& prob, double p_s, double t_1);

// Multi-start Nelder-Mead. `evaluations` counts inner evaluations.
OptimizationResult optimize(const OptimizationProblem& prob);

struct SweepRow {
  OptimizationResult result;
  std::string error;
};

// One optimization per p_a, warm-started from the previous optimum.
std::vector<SweepRow> sweep(const OptimizationProblem& tmpl, std::span<const double> p_a_values);

inline constexpr const char* kSweepCsvHeader = "p_a,p_s,t1,t2,objective,branch,order,engine,evals,ps_t1,error";

std::string format_csv_number(double x);
std::string csv_row(const OptimizationResult& r, const std::string& error = {});
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace orient::optimizer
