#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "orient/classical.hpp"

using namespace orient;
using namespace orient::classical;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

// <cos theta> for the laser-first pair evaluated through the kick chain at a fixed
// large node count, with signed times.
double chain_orientation(double ps, double pa, double t1, double t2, int n = 20000) {
  const auto ens = cached_ensemble(n);
  const ChainStep steps[] = {{0.0, KickKind::Symmetric, ps}, {t1, KickKind::Asymmetric, pa}};
  const auto state = run_chain(*ens, steps);
  return ensemble_average(*ens, state, 1, t2);
}

}  // namespace

TEST_CASE("ensemble construction") {
  const auto e2 = make_ensemble(2);
  CHECK(std::cos(e2.theta0[0]) == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(std::cos(e2.theta0[1]) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(e2.weight[0] == doctest::Approx(0.5));
  CHECK(e2.weight[1] == doctest::Approx(0.5));
  for (int n : {2, 3, 64, 1001}) {
    const auto e = make_ensemble(n);
    CHECK(std::abs(std::accumulate(e.weight.begin(), e.weight.end(), 0.0) - 1.0) < 1e-12);
    for (double th : e.theta0) CHECK((th >= 0.0 && th <= kPi));
  }
  const auto e64 = make_ensemble(64);
  CHECK(ensemble_average(e64, initial_state(e64), 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(std::abs(ensemble_average(e64, initial_state(e64), 1)) < 1e-15);
  CHECK_THROWS_AS(make_ensemble(1), ClassicalError);
  CHECK(cached_ensemble(64).get() == cached_ensemble(64).get());
}

TEST_CASE("propagation of single trajectories") {
  ClassicalEnsemble one{{1.0}, {1.0}};
  const std::vector<double> ts{0.0, 0.5, 3.0};
  for (const auto& s : propagate_classical({}, one, ts)) CHECK(s.theta[0] == 1.0);

  ClassicalEnsemble eq{{kPi / 2}, {1.0}};
  const PulseSequence hcp{{{KickKind::Asymmetric, 7.0, 0.0}}};
  const auto states = propagate_classical(hcp, eq, ts);
  for (std::size_t i = 0; i < ts.size(); ++i) CHECK(states[i].theta[0] == doctest::Approx(kPi / 2 - 7.0 * ts[i]));
}

TEST_CASE("laser-first trajectories reproduce the closed form") {
  ClassicalEnsemble ens{{kPi / 4}, {1.0}};
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> d1(0.0, 0.3), d2(0.0, 0.1);
  for (int trial = 0; trial < 5; ++trial) {
    const double t1 = d1(gen), t2 = d2(gen);
    const auto seq = make_two_pulse_sequence(PulseOrder::LaserFirst, -10.0, 100.0, t1);
    const double t = t1 + t2;
    const auto s = propagate_classical(seq, ens, std::span<const double>(&t, 1));
    CHECK(s[0].theta[0] == doctest::Approx(oracle::laser_first_angle(kPi / 4, -10.0, 100.0, t1, t2)).epsilon(1e-13));
  }
}

TEST_CASE("simultaneous kicks see the same pre-kick angle") {
  ClassicalEnsemble ens{{0.7}, {1.0}};
  const auto seq = make_two_pulse_sequence(PulseOrder::Simultaneous, -3.0, 5.0, 0.0);
  const double t = 0.2;
  const auto s = propagate_classical(seq, ens, std::span<const double>(&t, 1));
  const double omega = 3.0 * std::sin(1.4) - 5.0 * std::sin(0.7);
  CHECK(s[0].theta[0] == doctest::Approx(0.7 + omega * t));
}

TEST_CASE("observables without kicks") {
  const auto ts = linspace(0.0, 5.0, 11);
  const auto o1 = classical_observable({}, 1, ts);
  const auto o2 = classical_observable({}, 2, ts);
  for (double v : o1.values) CHECK(std::abs(v) < 1e-14);
  for (double v : o2.values) CHECK(v == doctest::Approx(1.0 / 3.0));
  CHECK(o2.kind == ObservableKind::Alignment);
  CHECK_THROWS_AS(classical_observable({}, 3, ts), std::invalid_argument);
}

TEST_CASE("single HCP saturates near 0.75") {
  for (double pa : {50.0, 100.0}) {
    const PulseSequence seq{{{KickKind::Asymmetric, pa, 0.0}}};
    const auto ts = linspace(0.0, 4.0 / pa, 801);
    const auto o = classical_observable(seq, 1, ts);
    CHECK(*std::max_element(o.values.begin(), o.values.end()) == doctest::Approx(0.75).epsilon(0.01 / 0.75));
  }
}

TEST_CASE("anti-alignment minimum after a negative symmetric kick") {
  const PulseSequence seq{{{KickKind::Symmetric, -10.0, 0.0}}};
  const auto ts = linspace(0.0, 0.3, 3001);
  const auto o = classical_observable(seq, 2, ts);
  const auto it = std::min_element(o.values.begin(), o.values.end());
  CHECK(std::abs(*it - 0.077) <= 0.002);
  CHECK(std::abs(ts[it - o.values.begin()] - 0.08) <= 0.01);
}

TEST_CASE("observables stay in range") {
  const auto seq = make_two_pulse_sequence(PulseOrder::HcpFirst, -40.0, 70.0, 0.01);
  const auto ts = linspace(-0.1, 1.0, 200);
  for (auto domain : {TimeDomain::Physical, TimeDomain::Extended}) {
    const auto o1 = classical_observable(seq, 1, ts, {.domain = domain});
    const auto o2 = classical_observable(seq, 2, ts, {.domain = domain});
    for (double v : o1.values) CHECK(std::abs(v) <= 1.0);
    for (double v : o2.values) CHECK((v >= 0.0 && v <= 1.0));
  }
}

TEST_CASE("convergence cap") {
  const PulseSequence seq{{{KickKind::Asymmetric, 1e4, 0.0}}};
  const std::vector<double> ts{50.0};
  CHECK_THROWS_AS(classical_observable(seq, 1, ts, {.max_nodes = 256}), ClassicalError);
}

TEST_CASE("extended domain runs the last flight backwards") {
  const PulseSequence seq{{{KickKind::Symmetric, 10.0, 0.0}}};
  const std::vector<double> ts{-0.08};
  const auto ext = classical_observable(seq, 2, ts, {.domain = TimeDomain::Extended});
  const auto neg = classical_observable({{{KickKind::Symmetric, -10.0, 0.0}}}, 2, std::vector<double>{0.08});
  CHECK(ext.values[0] == doctest::Approx(neg.values[0]).epsilon(1e-9));
  const auto phys = classical_observable(seq, 2, ts);
  CHECK(phys.values[0] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("time reversal symmetry") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> p(-30.0, 30.0), t(-0.3, 0.3);
  for (int trial = 0; trial < 10; ++trial) {
    const double ps = p(gen), pa = p(gen), t1 = t(gen), t2 = t(gen);
    CHECK(std::abs(chain_orientation(ps, pa, -t1, -t2) - chain_orientation(-ps, -pa, t1, t2)) < 1e-9);
  }
}

TEST_CASE("orientation flips with the HCP sign") {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> p(-30.0, 30.0), t(-0.3, 0.3);
  for (int trial = 0; trial < 10; ++trial) {
    const double ps = p(gen), pa = p(gen), t1 = t(gen), t2 = t(gen);
    CHECK(std::abs(chain_orientation(ps, pa, t1, t2) + chain_orientation(ps, -pa, t1, t2)) < 1e-9);
  }
}

TEST_CASE("scaling law") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> p(1.0, 40.0), t(0.0, 0.2), lam(0.2, 5.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double ps = -p(gen), pa = p(gen), t1 = t(gen), t2 = t(gen), l = lam(gen);
    for (auto order : {PulseOrder::LaserFirst, PulseOrder::HcpFirst}) {
      const auto a = make_two_pulse_sequence(order, ps, pa, t1);
      const auto b = make_two_pulse_sequence(order, l * ps, l * pa, t1 / l);
      const std::vector<double> ta{t1 + t2}, tb{(t1 + t2) / l};
      const double va = classical_observable(a, 1, ta).values[0];
      const double vb = classical_observable(b, 1, tb).values[0];
      CHECK(std::abs(va - vb) < 1e-9);
    }
  }
}

TEST_CASE("quadrature agrees with Monte Carlo sampling") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> p(-20.0, 20.0), t(0.0, 0.3);
  std::uniform_int_distribution<int> pick(0, 2);
  const PulseOrder orders[] = {PulseOrder::LaserFirst, PulseOrder::HcpFirst, PulseOrder::Simultaneous};
  for (int trial = 0; trial < 10; ++trial) {
    const auto order = orders[pick(gen)];
    const double t1 = order == PulseOrder::Simultaneous ? 0.0 : t(gen);
    const auto seq = make_two_pulse_sequence(order, p(gen), p(gen), t1);
    const double te = t1 + t(gen);
    const int k = 1 + trial % 2;
    const double q = classical_observable(seq, k, std::vector<double>{te}).values[0];
    const auto mc = oracle::monte_carlo(seq, te, k, 1000000, 100 + trial);
    CHECK(std::abs(q - mc.mean) <= 3.0 * mc.std_error);
  }
}
