#include "orient/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "orient/special_functions.hpp"

namespace orient::quantum {

namespace {

constexpr Complex kI{0.0, 1.0};

// Reduce a time to (-pi, pi] so integer-frequency phases stay accurate.
double reduce_time(double t) { return std::remainder(t, kRevivalPeriod); }

Complex ipow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

RotorWavefunction::RotorWavefunction(Eigen::VectorXcd coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < kMinLMax + 1)
    throw QuantumError(QuantumError::Code::InvalidBasis, "basis must include l = 0..4 at least");
}

double RotorWavefunction::tail_population() const {
  const int n = static_cast<int>(coeffs_.size());
  const int width = std::min(kTailWidth, n);
  return coeffs_.tail(width).squaredNorm();
}

RotorWavefunction RotorWavefunction::padded(int new_l_max) const {
  if (new_l_max <= l_max()) return *this;
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(new_l_max + 1);
  c.head(coeffs_.size()) = coeffs_;
  return RotorWavefunction(std::move(c));
}

double cos_element(int l) {
  const double x = l + 1.0;
  return x / std::sqrt((2.0 * l + 1.0) * (2.0 * l + 3.0));
}

std::shared_ptr<const CosineSpectrum> cosine_spectrum(int l_max) {
  static std::shared_mutex mutex;
  static std::map<int, std::shared_ptr<const CosineSpectrum>> cache;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(l_max); it != cache.end()) return it->second;
  }
  const int n = l_max + 1;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int l = 0; l < n - 1; ++l) sub[l] = cos_element(l);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  auto spec = std::make_shared<CosineSpectrum>();
  spec->l_max = l_max;
  spec->eigenvalues = solver.eigenvalues();
  spec->eigenvectors = solver.eigenvectors();

  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.emplace(l_max, std::move(spec));
  return it->second;
}

KickOperator::KickOperator(KickKind kind, int l_max) : kind_(kind), spectrum_(cosine_spectrum(l_max)) {}

Eigen::MatrixXd KickOperator::matrix() const {
  const int n = l_max() + 1;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int l = 0; l + 1 < n; ++l) c(l, l + 1) = c(l + 1, l) = cos_element(l);
  if (kind_ == KickKind::Asymmetric) return c;
  return c * c;
}

Eigen::VectorXd KickOperator::eigenvalues() const {
  if (kind_ == KickKind::Asymmetric) return spectrum_->eigenvalues;
  return spectrum_->eigenvalues.array().square().matrix();
}

Eigen::MatrixXd KickOperator::reconstruct() const {
  const auto& v = spectrum_->eigenvectors;
  return v * eigenvalues().asDiagonal() * v.transpose();
}

Eigen::VectorXcd KickOperator::apply(const Eigen::VectorXcd& coeffs, double strength) const {
  const auto& v = spectrum_->eigenvectors;
  const Eigen::VectorXd lambda = eigenvalues();
  auto unitary = [&](const Eigen::VectorXcd& x) {
    const Eigen::VectorXd re = v.transpose() * x.real();
    const Eigen::VectorXd im = v.transpose() * x.imag();
    Eigen::VectorXd out_re(lambda.size()), out_im(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      const Complex w = std::exp(kI * (strength * lambda[i])) * Complex(re[i], im[i]);
      out_re[i] = w.real();
      out_im[i] = w.imag();
    }
    Eigen::VectorXcd result(lambda.size());
    result.real() = v * out_re;
    result.imag() = v * out_im;
    return result;
  };
  if (kind_ == KickKind::Asymmetric) return unitary(coeffs);

  // cos^2 conserves parity; applying it to each parity sector separately keeps
  // the other sector exactly zero instead of at rounding level.
  Eigen::VectorXcd result = Eigen::VectorXcd::Zero(coeffs.size());
  for (int parity : {0, 1}) {
    Eigen::VectorXcd part = Eigen::VectorXcd::Zero(coeffs.size());
    for (Eigen::Index l = parity; l < coeffs.size(); l += 2) part[l] = coeffs[l];
    if (part.squaredNorm() == 0.0) continue;
    const Eigen::VectorXcd kicked = unitary(part);
    for (Eigen::Index l = parity; l < coeffs.size(); l += 2) result[l] = kicked[l];
  }
  return result;
}

RotorWavefunction ground_state(int l_max) {
  if (l_max < kMinLMax) throw QuantumError(QuantumError::Code::InvalidBasis, "l_max must be at least 4");
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(l_max + 1);
  c[0] = 1.0;
  return RotorWavefunction(std::move(c));
}

RotorWavefunction apply_kick(const RotorWavefunction& psi, KickKind kind, double strength) {
  if (strength == 0.0) return psi;
  // The kicked state reaches l ~ |strength|, so this can never fit.
  if (std::abs(strength) >= kMaxLMax)
    throw QuantumError(QuantumError::Code::BasisOverflow, "kick strength too large for l_max = 4096");
  int l_max = psi.l_max();
  while (true) {
    const auto in = psi.padded(l_max);
    RotorWavefunction out(KickOperator(kind, l_max).apply(in.coeffs(), strength));
    if (out.tail_population() < kTailTolerance) return out;
    if (l_max >= kMaxLMax)
      throw QuantumError(QuantumError::Code::BasisOverflow, "kick needs more than l_max = 4096");
    l_max = std::min(2 * l_max, kMaxLMax);
  }
}

RotorWavefunction free_propagate(const RotorWavefunction& psi, double dt) {
  if (dt == 0.0) return psi;
  const double t = reduce_time(dt);
  Eigen::VectorXcd c = psi.coeffs();
  for (int l = 1; l <= psi.l_max(); ++l) {
    const double n = 0.5 * l * (l + 1.0);
    c[l] *= std::polar(1.0, -n * t);
  }
  return RotorWavefunction(std::move(c));
}

ExpectationScanner::ExpectationScanner(const RotorWavefunction& psi, int k) : k_(k) {
  const auto& a = psi.coeffs();
  const int l_max = psi.l_max();
  if (k == 1) {
    // 2 Re sum_l c_l conj(a_l) a_{l+1} exp(-i (l+1) t)
    products_.resize(l_max);
    for (int l = 0; l < l_max; ++l) products_[l] = cos_element(l) * std::conj(a[l]) * a[l + 1];
  } else if (k == 2) {
    // diagonal: c_{l-1}^2 + c_l^2 (c_l couples to l+1 even beyond l_max);
    // off-diagonal: c_l c_{l+1}, frequency 2l + 3.
    for (int l = 0; l <= l_max; ++l) {
      const double below = l > 0 ? cos_element(l - 1) : 0.0;
      const double above = cos_element(l);
      diagonal_ += (below * below + above * above) * std::norm(a[l]);
    }
    products_.resize(std::max(0, l_max - 1));
    for (int l = 0; l + 2 <= l_max; ++l)
      products_[l] = cos_element(l) * cos_element(l + 1) * std::conj(a[l]) * a[l + 2];
  } else {
    throw std::invalid_argument("observable power must be 1 or 2");
  }
}

double ExpectationScanner::operator()(double dt) const {
  const double t = reduce_time(dt);
  double sum = 0.0;
  if (k_ == 1) {
    const Complex step = std::polar(1.0, -t);
    Complex phase = step;
    for (const auto& p : products_) {
      sum += (p * phase).real();
      phase *= step;
    }
    return 2.0 * sum;
  }
  const Complex step = std::polar(1.0, -2.0 * t);
  Complex phase = std::polar(1.0, -3.0 * t);
  for (const auto& p : products_) {
    sum += (p * phase).real();
    phase *= step;
  }
  return diagonal_ + 2.0 * sum;
}

double expectation(const RotorWavefunction& psi, int k) { return ExpectationScanner(psi, k)(0.0); }

int default_l_max(const PulseSequence& seq) {
  double total = 0.0;
  for (const auto& k : seq.kicks) total += std::abs(k.strength);
  return std::min(kMaxLMax, static_cast<int>(std::ceil(3.0 * total)) + 20);
}

namespace {

// Post-kick states after each group of simultaneous kicks.
std::vector<PostKickState> kick_history(const PulseSequence& seq, int l_max) {
  std::vector<PostKickState> history;
  auto psi = ground_state(l_max);
  double t_prev = seq.empty() ? 0.0 : seq.kicks.front().time;
  for (std::size_t i = 0; i < seq.kicks.size();) {
    const double t = seq.kicks[i].time;
    psi = free_propagate(psi, t - t_prev);
    // Equal-time kicks commute (both diagonal in theta).
    while (i < seq.kicks.size() && seq.kicks[i].time == t) psi = apply_kick(psi, seq.kicks[i++]);
    history.push_back({psi, t});
    t_prev = t;
  }
  return history;
}

}  // namespace

PostKickState propagate_through(const PulseSequence& seq, int l_max_hint) {
  const int l_max = std::max(kMinLMax, l_max_hint > 0 ? l_max_hint : default_l_max(seq));
  auto history = kick_history(seq, l_max);
  if (history.empty()) return {ground_state(l_max), 0.0};
  return history.back();
}

ObservableSeries run_sequence(const PulseSequence& seq, std::span<const double> t_eval, int k,
                              int l_max_hint) {
  ObservableSeries series;
  series.kind = observable_for_power(k);
  series.times.assign(t_eval.begin(), t_eval.end());
  series.values.reserve(t_eval.size());

  const int l_max = std::max(kMinLMax, l_max_hint > 0 ? l_max_hint : default_l_max(seq));
  const auto history = kick_history(seq, l_max);
  const auto ground = ground_state(l_max);

  std::vector<ExpectationScanner> scanners;
  scanners.reserve(history.size());
  for (const auto& h : history) scanners.emplace_back(h.psi, k);
  const ExpectationScanner ground_scan(ground, k);

  for (double t : t_eval) {
    // last kick group with time <= t
    auto it = std::upper_bound(history.begin(), history.end(), t,
                               [](double x, const PostKickState& h) { return x < h.time; });
    if (it == history.begin()) {
      series.values.push_back(ground_scan(0.0));
    } else {
      const auto idx = static_cast<std::size_t>(std::distance(history.begin(), it) - 1);
      series.values.push_back(scanners[idx](t - history[idx].time));
    }
  }
  return series;
}

std::vector<Complex> symmetric_kick_cj(double p_s, int j_max) {
  std::vector<Complex> c(j_max + 1);
  for (int j = 0; j <= j_max; ++j) {
    const double log_gamma_ratio = std::lgamma(j + 0.5) - std::lgamma(2.0 * j + 1.5);
    const Complex power = ipow(j) * std::pow(p_s, j);
    const Complex f = special::hyp1f1(j + 0.5, 2.0 * j + 1.5, Complex(0.0, p_s));
    c[j] = std::sqrt(kPi * (4.0 * j + 1.0)) * power * std::exp(log_gamma_ratio) * f;
  }
  return c;
}

std::vector<Complex> rayleigh_coefficients(double p_a, int l_max) {
  const auto jl = special::spherical_bessel_j(l_max, p_a);
  std::vector<Complex> out(l_max + 1);
  for (int l = 0; l <= l_max; ++l) out[l] = ipow(l) * std::sqrt(2.0 * l + 1.0) * jl[l];
  return out;
}

std::vector<Complex> dl_crosscheck(double p_s, double p_a, double t_1, int l_max, DlIndexing indexing) {
  constexpr double kSeriesTail = 1e-15;
  // Truncation orders for the two series: c_J and j_j(P_a) both decay
  // super-exponentially once the index exceeds the kick strength.
  const int j_cut = static_cast<int>(std::ceil(std::abs(p_a))) + 40;
  const int lp_cut = static_cast<int>(std::ceil(std::abs(p_s))) + 30;
  const auto bessel = special::spherical_bessel_j(j_cut, p_a);
  const auto cj = symmetric_kick_cj(p_s, std::max(lp_cut, j_cut));
  if (std::abs(bessel[j_cut]) > kSeriesTail || std::abs(cj[lp_cut]) > kSeriesTail)
    throw QuantumError(QuantumError::Code::SeriesTruncationFailure, "d_l double series not converged");

  const double inv_sqrt_4pi = 1.0 / std::sqrt(4.0 * kPi);
  std::vector<Complex> d(l_max + 1, Complex(0.0));
  for (int l = 0; l <= l_max; ++l) {
    Complex sum = 0.0;
    for (int lp = 0; lp <= lp_cut; ++lp) {
      const Complex free_phase = std::polar(1.0, -lp * (2.0 * lp + 1.0) * reduce_time(t_1));
      for (int j = std::abs(l - 2 * lp); j <= std::min(j_cut, l + 2 * lp); ++j) {
        const double cg = special::clebsch_gordan_000(j, 2 * lp, l);
        if (cg == 0.0) continue;
        const Complex coeff = indexing == DlIndexing::AsPrinted ? cj[j] : cj[lp];
        const double geom = std::sqrt((2.0 * j + 1.0) * (4.0 * lp + 1.0) * (2.0 * l + 1.0)) * cg * cg /
                            (2.0 * l + 1.0);
        sum += ipow(j) * std::sqrt(2.0 * j + 1.0) * bessel[j] * coeff * free_phase * geom;
      }
    }
    d[l] = inv_sqrt_4pi * sum;
  }
  return d;
}

}  // namespace orient::quantum
