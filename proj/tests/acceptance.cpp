// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "orient/classical.hpp"
#include "orient/core_types.hpp"
#include "orient/lab_units.hpp"
#include "orient/optimizer.hpp"
#include "orient/quantum.hpp"

using namespace orient;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> grid(double a, double b, double step) {
  std::vector<double> v;
  const int n = static_cast<int>(std::round((b - a) / step));
  for (int i = 1; i <= n; ++i) v.push_back(a + step * i);
  return v;
}

std::pair<double, double> minimum(const std::vector<double>& t, const std::vector<double>& v) {
  const auto it = std::min_element(v.begin(), v.end());
  return {t[it - v.begin()], *it};
}

Outcome anti_alignment_minimum() {
  const PulseSequence seq{{{KickKind::Symmetric, -10.0, 0.0}}};
  const auto ts = grid(0.0, 0.3, 1e-4);
  const auto q = quantum::run_sequence(seq, ts, 2).values;
  const auto c = classical::classical_observable(seq, 2, ts).values;
  const auto [tq, vq] = minimum(ts, q);
  const auto [tc, vc] = minimum(ts, c);
  double curve_gap = 0.0;
  for (std::size_t i = 0; i < ts.size() && ts[i] <= 0.15; ++i) curve_gap = std::max(curve_gap, std::abs(q[i] - c[i]));
  const bool pass = std::abs(vq - 0.077) <= 0.003 && std::abs(tq - 0.080) <= 0.010 && std::abs(vc - vq) <= 0.02 &&
                    curve_gap <= 0.02;
  return {pass, fmt("quantum min %.5f at t=%.4f; classical min %.5f at t=%.4f (|diff| %.4f); max curve gap on "
                    "(0,0.15] %.4f",
                    vq, tq, vc, tc, std::abs(vc - vq), curve_gap)};
}

Outcome single_hcp() {
  double v[2];
  const double pas[2] = {50.0, 100.0};
  for (int i = 0; i < 2; ++i) {
    const PulseSequence seq{{{KickKind::Asymmetric, pas[i], 0.0}}};
    const auto ts = grid(0.0, 4.0 / pas[i], 0.005 / pas[i]);
    const auto o = classical::classical_observable(seq, 1, ts).values;
    v[i] = *std::max_element(o.begin(), o.end());
  }
  const bool pass = std::abs(v[0] - 0.75) <= 0.01 && std::abs(v[1] - 0.75) <= 0.01 && std::abs(v[0] - v[1]) <= 0.01;
  return {pass, fmt("max <cos> = %.5f (P_a=50), %.5f (P_a=100)", v[0], v[1])};
}

Outcome simultaneous_optimum() {
  const auto r = optimizer::optimize(optimizer::make_problem(Engine::Classical, PulseOrder::Simultaneous, 100.0));
  const double ratio = r.p_a / std::abs(r.p_s), delay = std::abs(r.p_s) * r.t_2;
  const bool pass = std::abs(r.objective - 0.89) <= 0.01 && std::abs(ratio - 2.34) <= 0.1 && std::abs(delay - 0.78) <= 0.05;
  return {pass, fmt("objective %.5f, P_a/|P_s| %.4f, |P_s| t_2 %.4f", r.objective, ratio, delay)};
}

Outcome hcp_first_optimum() {
  const auto r = optimizer::optimize(optimizer::make_problem(Engine::Classical, PulseOrder::HcpFirst, 100.0));
  const double ratio = r.p_a / std::abs(r.p_s), delay = std::abs(r.p_s) * r.t_1;
  const bool pass = std::abs(r.objective - 0.96) <= 0.01 && std::abs(ratio - 1.6) <= 0.1 && std::abs(delay - 0.36) <= 0.04;
  return {pass, fmt("objective %.5f, P_a/|P_s| %.4f, |P_s| t_1 %.4f", r.objective, ratio, delay)};
}

Outcome laser_first_optimum() {
  using optimizer::make_problem;
  const auto p = optimizer::optimize(make_problem(Engine::Classical, PulseOrder::LaserFirst, 100.0, Branch::Prompt));
  const auto r = optimizer::optimize(make_problem(Engine::Classical, PulseOrder::LaserFirst, 100.0, Branch::Revival));
  const bool pass = std::abs(p.objective) >= 0.93 && std::abs(r.objective) >= 0.93 && r.objective < 0.0;
  return {pass, fmt("prompt %.5f (|P_s|=%.2f), revival %.5f (|P_s|=%.2f, t_2=%.4f)", p.objective, std::abs(p.p_s),
                    r.objective, std::abs(r.p_s), r.t_2)};
}

Outcome quantum_classical_agreement() {
  bool pass = true;
  std::ostringstream detail;
  for (auto order : {PulseOrder::LaserFirst, PulseOrder::HcpFirst}) {
    detail << to_string(order) << ':';
    for (double pa : {3.0, 5.0, 10.0}) {
      const auto q = optimizer::optimize(optimizer::make_problem(Engine::Quantum, order, pa));
      const auto c = optimizer::optimize(optimizer::make_problem(Engine::Classical, order, pa));
      const double gap = std::abs(q.objective - c.objective);
      pass = pass && gap <= 0.03;
      detail << fmt(" P_a=%g q=%.4f c=%.4f gap=%.4f;", pa, q.objective, c.objective, gap);
    }
    detail << ' ';
  }
  return {pass, detail.str()};
}

Outcome oracle_equivalence() {
  const oracle::GridPropagator grid_oracle(4096, 260);
  std::mt19937_64 gen(20240611);
  std::uniform_real_distribution<double> p(-20.0, 20.0), t(0.0, 2.0), te(0.0, 7.0);
  std::uniform_int_distribution<int> count(1, 3), kind(0, 1);
  double grid_err = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    PulseSequence seq;
    const int n = count(gen);
    for (int i = 0; i < n; ++i)
      seq.kicks.push_back({kind(gen) ? KickKind::Asymmetric : KickKind::Symmetric, p(gen), t(gen)});
    seq = validate_sequence(seq);
    std::vector<double> times{te(gen), te(gen), seq.kicks.back().time + 0.1};
    std::sort(times.begin(), times.end());
    for (int k : {1, 2}) {
      const auto basis = quantum::run_sequence(seq, times, k);
      for (std::size_t i = 0; i < times.size(); ++i)
        grid_err = std::max(grid_err, std::abs(basis.values[i] - grid_oracle.evaluate(seq, times[i], k)));
    }
  }

  double cj_err = 0.0, rayleigh_err = 0.0;
  for (double strength : {-5.0, -2.0, 0.5, 3.0, 5.0}) {
    const auto sym = quantum::apply_kick(quantum::ground_state(60), KickKind::Symmetric, strength);
    const auto cj = quantum::symmetric_kick_cj(strength, 16);
    for (int j = 0; j <= 8; ++j) cj_err = std::max(cj_err, std::abs(sym[2 * j] * std::sqrt(4.0 * kPi) - cj[j]));
    for (int j = 9; j <= 16; ++j) {
      const auto amp = 2 * j <= sym.l_max() ? sym[2 * j] : quantum::Complex(0.0);
      cj_err = std::max(cj_err, std::abs(amp * std::sqrt(4.0 * kPi) - cj[j]));
    }
    const auto asym = quantum::apply_kick(quantum::ground_state(60), KickKind::Asymmetric, strength);
    const auto ray = quantum::rayleigh_coefficients(strength, 16);
    for (int l = 0; l <= 16; ++l) rayleigh_err = std::max(rayleigh_err, std::abs(asym[l] - ray[l]));
  }
  const bool pass = grid_err <= 1e-8 && cj_err <= 1e-8 && rayleigh_err <= 1e-8;
  return {pass, fmt("grid oracle max err %.2e; c_J max err %.2e; Rayleigh max err %.2e", grid_err, cj_err, rayleigh_err)};
}

double chain_orientation(double ps, double pa, double t1, double t2) {
  const auto ens = classical::cached_ensemble(16384);
  const classical::ChainStep steps[] = {{0.0, KickKind::Symmetric, ps}, {t1, KickKind::Asymmetric, pa}};
  return classical::ensemble_average(*ens, classical::run_chain(*ens, steps), 1, t2);
}

Outcome property_suite() {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> p(-20.0, 20.0), dt(0.0, 3.0), ts(-0.3, 0.3), lam(0.2, 5.0);

  double norm_err = 0.0, period_err = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    auto psi = quantum::ground_state(40);
    for (int step = 0; step < 10; ++step) {
      psi = quantum::apply_kick(psi, step % 2 ? KickKind::Asymmetric : KickKind::Symmetric, p(gen));
      psi = quantum::free_propagate(psi, dt(gen));
    }
    norm_err = std::max(norm_err, std::abs(psi.norm_squared() - 1.0));
    const PulseSequence seq{{{KickKind::Symmetric, p(gen), 0.0}, {KickKind::Asymmetric, p(gen), 0.2}}};
    const std::vector<double> a{0.3, 1.1, 2.9}, b{0.3 + kRevivalPeriod, 1.1 + kRevivalPeriod, 2.9 + kRevivalPeriod};
    for (int k : {1, 2}) {
      const auto va = quantum::run_sequence(seq, a, k).values, vb = quantum::run_sequence(seq, b, k).values;
      for (std::size_t i = 0; i < a.size(); ++i) period_err = std::max(period_err, std::abs(va[i] - vb[i]));
    }
  }

  double eq5 = 0.0, eq6 = 0.0, scaling = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const double ps = p(gen), pa = p(gen), t1 = ts(gen), t2 = ts(gen);
    eq5 = std::max(eq5, std::abs(chain_orientation(ps, pa, -t1, -t2) - chain_orientation(-ps, -pa, t1, t2)));
    eq6 = std::max(eq6, std::abs(chain_orientation(ps, pa, t1, t2) + chain_orientation(ps, -pa, t1, t2)));
    const double l = lam(gen), u1 = std::abs(t1), u2 = std::abs(t2);
    const auto sa = make_two_pulse_sequence(PulseOrder::LaserFirst, ps, pa, u1);
    const auto sb = make_two_pulse_sequence(PulseOrder::LaserFirst, l * ps, l * pa, u1 / l);
    const double va = classical::classical_observable(sa, 1, std::vector<double>{u1 + u2}).values[0];
    const double vb = classical::classical_observable(sb, 1, std::vector<double>{(u1 + u2) / l}).values[0];
    scaling = std::max(scaling, std::abs(va - vb));
  }

  double parity = 0.0;
  const PulseSequence sym{{{KickKind::Symmetric, 9.0, 0.0}, {KickKind::Symmetric, -6.0, 0.4}}};
  for (double v : quantum::run_sequence(sym, grid(0.0, 6.0, 0.05), 1).values) parity = std::max(parity, std::abs(v));
  const auto post = quantum::propagate_through(sym);
  for (int l = 1; l <= post.psi.l_max(); l += 2) parity = std::max(parity, std::abs(post.psi[l]));

  const bool pass = norm_err <= 1e-10 && period_err <= 1e-10 && eq5 <= 1e-9 && eq6 <= 1e-9 && scaling <= 1e-9 &&
                    parity == 0.0;
  return {pass, fmt("unitarity %.1e; periodicity %.1e; Eq5 %.1e; Eq6 %.1e; scaling %.1e; parity %.1e", norm_err,
                    period_err, eq5, eq6, scaling, parity)};
}

Outcome units_check() {
  const auto mol = units::kcl();
  const double pa = units::kick_strength(mol, {units::LabPulseKind::HalfCycle, 100.0, 2.0});
  const double fwd = std::abs(units::time_to_dimensionless(mol, mol.revival_time_ps) - kRevivalPeriod);
  const double back = std::abs(units::time_from_dimensionless(mol, kRevivalPeriod) - mol.revival_time_ps);
  const bool pass = pa >= 8.0 && pa <= 12.0 && fwd <= 1e-12 && back <= 1e-12;
  return {pass, fmt("KCl P_a = %.4f; round trip errors %.1e, %.1e", pa, fwd, back)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"anti-alignment minimum", anti_alignment_minimum},
      {"single-HCP saturation", single_hcp},
      {"simultaneous hybrid optimum", simultaneous_optimum},
      {"HCP-first optimum", hcp_first_optimum},
      {"laser-first optimum, both branches", laser_first_optimum},
      {"quantum-classical agreement", quantum_classical_agreement},
      {"oracle equivalence", oracle_equivalence},
      {"property suite", property_suite},
      {"lab units", units_check},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s %zu. %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
