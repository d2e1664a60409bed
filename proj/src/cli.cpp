#include "orient/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "orient/classical.hpp"
#include "orient/core_types.hpp"
#include "orient/lab_units.hpp"
#include "orient/optimizer.hpp"
#include "orient/quantum.hpp"

namespace orient::cli {

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PulseArgs {
  std::string order = "laser-first";
  double p_s = 0.0;
  double p_a = 0.0;
  double t_1 = 0.0;
};

struct SimulateArgs {
  std::string engine = "quantum";
  PulseArgs pulse;
  std::string sequence_file;
  int k = 2;
  double t_min = 0.0;
  double t_max = kRevivalPeriod;
  int n_points = 301;
  int l_max = 0;
  int nodes = 0;
  std::string out;
};

struct OptimizeArgs {
  std::string engine = "classical";
  std::string order = "laser-first";
  std::string branch = "prompt";
  std::string objective = "plus";
  double p_a = 0.0;
  std::string pa_list;
  int starts = 8;
  std::uint64_t seed = 0;
  int l_max = 0;
  int nodes = 0;
  std::string out;
};

struct ConvertArgs {
  std::string molecule;
  std::optional<double> dipole, anisotropy, revival_time;
  std::optional<double> hcp_field, hcp_duration, laser_intensity, laser_duration;
  std::vector<double> times_ps;
};

std::string fmt(double x) { return optimizer::format_csv_number(x); }

// Writes to the named file, or to `fallback` when the name is empty.
template <typename Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file '" + path + "'");
  fn(file);
}

std::vector<double> parse_number_list(const std::string& text) {
  std::string cleaned = text;
  std::replace_if(cleaned.begin(), cleaned.end(), [](char c) { return c == ',' || c == '[' || c == ']' || c == ';'; }, ' ');
  std::istringstream in(cleaned);
  std::vector<double> values;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw ConfigError("not a number: '" + tok + "'");
    values.push_back(v);
  }
  return values;
}

PulseSequence sequence_from(const SimulateArgs& a) {
  if (!a.sequence_file.empty()) {
    std::ifstream in(a.sequence_file);
    if (!in) throw ConfigError("cannot read sequence file '" + a.sequence_file + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_sequence(buf.str());
  }
  return make_two_pulse_sequence(parse_order(a.pulse.order), a.pulse.p_s, a.pulse.p_a, a.pulse.t_1);
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  if (a.engine != "classical" && a.engine != "quantum" && a.engine != "both")
    throw ConfigError("engine must be classical, quantum or both");
  if (a.k != 1 && a.k != 2) throw ConfigError("--k must be 1 or 2");
  if (a.n_points < 2 || !(a.t_max > a.t_min)) throw ConfigError("time grid needs tmax > tmin and at least 2 points");
  const auto seq = sequence_from(a);

  std::vector<double> times(a.n_points);
  for (int i = 0; i < a.n_points; ++i) times[i] = a.t_min + (a.t_max - a.t_min) * i / (a.n_points - 1);

  const bool want_classical = a.engine != "quantum";
  const bool want_quantum = a.engine != "classical";
  std::vector<double> classical_values, quantum_values;
  if (want_quantum) quantum_values = quantum::run_sequence(seq, times, a.k, a.l_max).values;
  if (want_classical) {
    classical::ObservableOptions opts;
    opts.n_nodes = a.nodes;
    if (a.engine == "both") {
      // Overlay mode: beyond half a revival the classical curve is the
      // negative-time continuation, shifted by one revival period.
      std::vector<double> near, far;
      for (double t : times) (t > kPi ? far : near).push_back(t);
      std::vector<double> far_shifted(far.size());
      std::transform(far.begin(), far.end(), far_shifted.begin(),
                     [](double t) { return std::remainder(t, kRevivalPeriod); });
      if (!near.empty()) classical_values = classical::classical_observable(seq, a.k, near, opts).values;
      if (!far.empty()) {
        opts.domain = classical::TimeDomain::Extended;
        const auto v = classical::classical_observable(seq, a.k, far_shifted, opts).values;
        classical_values.insert(classical_values.end(), v.begin(), v.end());
      }
    } else {
      classical_values = classical::classical_observable(seq, a.k, times, opts).values;
    }
  }

  const std::string kind(to_string(observable_for_power(a.k)));
  with_output(a.out, out, [&](std::ostream& os) {
    os << "t,value,kind,engine\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (want_classical) os << fmt(times[i]) << ',' << fmt(classical_values[i]) << ',' << kind << ",classical\n";
      if (want_quantum) os << fmt(times[i]) << ',' << fmt(quantum_values[i]) << ',' << kind << ",quantum\n";
    }
  });
  return kExitOk;
}

optimizer::OptimizationProblem problem_from(const OptimizeArgs& a, double p_a) {
  auto prob = optimizer::make_problem(parse_engine(a.engine), parse_order(a.order), p_a, parse_branch(a.branch));
  if (a.objective == "plus")
    prob.sense = optimizer::ObjectiveSense::MaximizePlus;
  else if (a.objective == "abs")
    prob.sense = optimizer::ObjectiveSense::MaximizeAbs;
  else
    throw ConfigError("objective must be plus or abs");
  if (a.starts < 1) throw ConfigError("--starts must be positive");
  prob.settings.starts = a.starts;
  prob.settings.seed = a.seed;
  prob.settings.l_max = a.l_max;
  prob.settings.classical_nodes = a.nodes;
  return prob;
}

int cmd_optimize(const OptimizeArgs& a, std::ostream& out, std::ostream& err) {
  const auto prob = problem_from(a, a.p_a);
  const auto r = optimizer::optimize(prob);
  if (!r.note.empty()) err << "warning: " << r.note << '\n';
  out << "engine      " << to_string(r.engine) << '\n'
      << "order       " << to_string(r.order) << '\n'
      << "branch      " << to_string(r.branch) << '\n'
      << "p_a         " << fmt(r.p_a) << '\n'
      << "p_s*        " << fmt(r.p_s) << '\n'
      << "t_1*        " << fmt(r.t_1) << "  (|p_s| t_1 = " << fmt(std::abs(r.p_s) * r.t_1) << ")\n"
      << "t_2*        " << fmt(r.t_2) << '\n'
      << "objective   " << fmt(r.objective) << '\n'
      << "evaluations " << r.evaluations << '\n';
  const std::string row = optimizer::csv_row(r);
  if (!a.out.empty()) {
    with_output(a.out, out, [&](std::ostream& os) { os << optimizer::kSweepCsvHeader << '\n' << row << '\n'; });
  } else {
    out << optimizer::kSweepCsvHeader << '\n' << row << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const OptimizeArgs& a, std::ostream& out, std::ostream& err) {
  auto values = parse_number_list(a.pa_list);
  if (values.empty()) throw ConfigError("sweep needs a non-empty pa-list");
  for (double v : values)
    if (!(v > 0.0)) throw ConfigError("pa-list values must be positive");
  std::sort(values.begin(), values.end());
  const auto prob = problem_from(a, values.front());
  if (prob.engine == Engine::Quantum && values.back() > 30.0)
    err << "warning: quantum sweeps above p_a = 30 are slow\n";
  const auto rows = optimizer::sweep(prob, values);
  with_output(a.out, out, [&](std::ostream& os) { optimizer::write_sweep_csv(os, rows); });
  const bool all_failed = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return !r.error.empty(); });
  for (const auto& r : rows)
    if (!r.error.empty()) err << "p_a = " << fmt(r.result.p_a) << ": " << r.error << '\n';
  return all_failed ? kExitNumeric : kExitOk;
}

int cmd_convert(const ConvertArgs& a, std::ostream& out, std::ostream& err) {
  units::MoleculeParams mol;
  if (a.molecule == "kcl" || a.molecule == "KCl") {
    mol = units::kcl();
  } else if (!a.molecule.empty()) {
    throw ConfigError("unknown molecule preset '" + a.molecule + "'");
  }
  if (a.dipole) mol.dipole_debye = *a.dipole;
  if (a.anisotropy) mol.anisotropy_a3 = *a.anisotropy;
  if (a.revival_time) mol.revival_time_ps = *a.revival_time;
  if (!(mol.revival_time_ps > 0.0)) throw ConfigError("convert needs --revival-time or --molecule");

  const bool hcp = a.hcp_field || a.hcp_duration;
  const bool laser = a.laser_intensity || a.laser_duration;
  if (!hcp && !laser && a.times_ps.empty()) throw ConfigError("convert needs a pulse (--hcp-* or --laser-*) or --time");
  if (hcp && !(a.hcp_field && a.hcp_duration)) throw ConfigError("HCP needs both --hcp-field and --hcp-duration");
  if (laser && !(a.laser_intensity && a.laser_duration))
    throw ConfigError("laser pulse needs both --laser-intensity and --laser-duration");
  try {
    units::validate(mol);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  out << "revival time      " << fmt(mol.revival_time_ps) << " ps = 2pi\n";
  auto report = [&](const char* name, const char* symbol, const units::LabPulse& pulse) {
    const double p = units::kick_strength(mol, pulse);
    out << symbol << "               " << fmt(p) << '\n'
        << name << " duration    " << fmt(units::time_to_dimensionless(mol, pulse.duration_ps)) << " (dimensionless)\n";
    if (units::exceeds_impulsive_limit(mol, pulse))
      err << "warning: " << name << " duration " << fmt(pulse.duration_ps)
          << " ps exceeds 5% of the revival time; the impulsive approximation is questionable\n";
  };
  if (hcp) report("hcp  ", "P_a", {units::LabPulseKind::HalfCycle, *a.hcp_field, *a.hcp_duration});
  if (laser) report("laser", "P_s", {units::LabPulseKind::Laser, *a.laser_intensity, *a.laser_duration});
  for (double t : a.times_ps)
    out << "t = " << fmt(t) << " ps  ->  " << fmt(units::time_to_dimensionless(mol, t)) << '\n';
  return kExitOk;
}

void add_optimize_options(CLI::App* sub, OptimizeArgs& a) {
  sub->add_option("--engine", a.engine, "classical | quantum")->capture_default_str();
  sub->add_option("--order", a.order, "laser-first | hcp-first | simultaneous")->capture_default_str();
  sub->add_option("--branch", a.branch, "prompt | revival")->capture_default_str();
  sub->add_option("--objective", a.objective, "plus | abs")->capture_default_str();
  sub->add_option("--starts", a.starts, "Nelder-Mead starts")->capture_default_str();
  sub->add_option("--seed", a.seed, "seed for multi-start jitter")->capture_default_str();
  sub->add_option("--lmax", a.l_max, "quantum basis size (0 = automatic)");
  sub->add_option("--nodes", a.nodes, "classical quadrature nodes (0 = automatic)");
  sub->add_option("--out", a.out, "CSV output path");
  sub->add_option("--config", "flat key = value configuration file");
}

// Inlines a `--config FILE` of flat `key = value` lines ('#' comments) as
// `--key value` arguments. Flags given on the command line take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config needs a file name");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;

  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  auto given = [&](const std::string& key) {
    return std::any_of(rest.begin(), rest.end(), [&](const std::string& a) {
      return a == "--" + key || a.rfind("--" + key + "=", 0) == 0;
    });
  };
  std::vector<std::string> from_file;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    auto strip = [](std::string v) {
      const auto b = v.find_first_not_of(" \t\r\"");
      if (b == std::string::npos) return std::string{};
      const auto e = v.find_last_not_of(" \t\r\"");
      return v.substr(b, e - b + 1);
    };
    std::string key = strip(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
    if (given(key)) continue;
    from_file.push_back("--" + key);
    from_file.push_back(value);
  }
  // Subcommand name stays first.
  if (rest.empty()) return from_file;
  std::vector<std::string> out{rest.front()};
  out.insert(out.end(), from_file.begin(), from_file.end());
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Field-free molecular orientation by impulsive pulse pairs", "orient_cli"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "orientation/alignment factor versus time");
  simulate->add_option("--engine", sim.engine, "classical | quantum | both")->capture_default_str();
  simulate->add_option("--order", sim.pulse.order, "laser-first | hcp-first | simultaneous")->capture_default_str();
  simulate->add_option("--ps", sim.pulse.p_s, "symmetric kick strength");
  simulate->add_option("--pa", sim.pulse.p_a, "asymmetric kick strength");
  simulate->add_option("--t1", sim.pulse.t_1, "delay of the second pulse");
  simulate->add_option("--sequence", sim.sequence_file, "kick sequence file (overrides --ps/--pa/--t1)");
  simulate->add_option("--k", sim.k, "1 = <cos>, 2 = <cos^2>")->capture_default_str();
  simulate->add_option("--tmin", sim.t_min)->capture_default_str();
  simulate->add_option("--tmax", sim.t_max)->capture_default_str();
  simulate->add_option("--npoints", sim.n_points)->capture_default_str();
  simulate->add_option("--lmax", sim.l_max, "quantum basis size (0 = automatic)");
  simulate->add_option("--nodes", sim.nodes, "classical quadrature nodes (0 = automatic)");
  simulate->add_option("--out", sim.out, "CSV output path");
  simulate->add_option("--config", "flat key = value configuration file");

  OptimizeArgs opt;
  auto* optimize = app.add_subcommand("optimize", "maximize orientation for one p_a");
  optimize->add_option("--pa", opt.p_a, "asymmetric kick strength")->required();
  add_optimize_options(optimize, opt);

  OptimizeArgs sw;
  auto* sweep = app.add_subcommand("sweep", "optimize over a list of p_a values");
  sweep->add_option("--pa-list", sw.pa_list, "comma separated p_a values");
  add_optimize_options(sweep, sw);

  ConvertArgs conv;
  auto* convert = app.add_subcommand("convert", "lab units to dimensionless kick strengths");
  convert->add_option("--molecule", conv.molecule, "preset: kcl");
  convert->add_option("--dipole", conv.dipole, "Debye");
  convert->add_option("--anisotropy", conv.anisotropy, "alpha_par - alpha_perp in A^3");
  convert->add_option("--revival-time", conv.revival_time, "ps");
  convert->add_option("--hcp-field", conv.hcp_field, "kV/cm");
  convert->add_option("--hcp-duration", conv.hcp_duration, "ps, 1/e half-width");
  convert->add_option("--laser-intensity", conv.laser_intensity, "W/cm^2");
  convert->add_option("--laser-duration", conv.laser_duration, "ps, 1/e half-width of the intensity");
  convert->add_option("--time", conv.times_ps, "lab times (ps) to convert");
  convert->add_option("--config", "flat key = value configuration file");

  std::vector<std::string> expanded;
  try {
    expanded = expand_config(args);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*simulate) return cmd_simulate(sim, out);
    if (*optimize) return cmd_optimize(opt, out, err);
    if (*sweep) return cmd_sweep(sw, out, err);
    if (*convert) return cmd_convert(conv, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SequenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitConfig;
}

}  // namespace orient::cli
