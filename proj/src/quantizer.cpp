#include "lrmimo/quantizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>

namespace lrmimo {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kLevelTol = 1e-12;   // convergence: max level movement
constexpr int kMaxIterations = 10000;

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Phi(b) - Phi(a), evaluated so that relative precision survives in either
// tail (erfc differences in the tails, erf differences around zero).
double normal_mass(double a, double b) {
  constexpr double s = 0.7071067811865475244;  // 1/sqrt(2)
  if (a >= 0.0) return 0.5 * (std::erfc(a * s) - std::erfc(b * s));
  if (b <= 0.0) return 0.5 * (std::erfc(-b * s) - std::erfc(-a * s));
  return 0.5 * (std::erf(b * s) - std::erf(a * s));
}

// E[X | a < X <= b] for X ~ N(0,1); pass -inf/+inf for the outer cells.
double cell_centroid(double a, double b) {
  const double pa = std::isinf(a) ? 0.0 : normal_pdf(a);
  const double pb = std::isinf(b) ? 0.0 : normal_pdf(b);
  const double lo = std::isinf(a) ? -38.0 : a;  // normal_mass saturates past here
  const double hi = std::isinf(b) ? 38.0 : b;
  return (pa - pb) / normal_mass(lo, hi);
}

// Quantile of N(0,1) by bisection; only used to seed the solver.
double normal_quantile(double p) {
  double lo = -10.0, hi = 10.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_mass(-38.0, mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct LloydWork {
  std::vector<double> levels;
  std::vector<double> thresholds;  // midpoints of adjacent levels

  void refresh_thresholds() {
    for (std::size_t j = 0; j + 1 < levels.size(); ++j)
      thresholds[j] = 0.5 * (levels[j] + levels[j + 1]);
  }

  double cell_lo(std::size_t j) const {
    return j == 0 ? -std::numeric_limits<double>::infinity() : thresholds[j - 1];
  }
  double cell_hi(std::size_t j) const {
    return j + 1 == levels.size() ? std::numeric_limits<double>::infinity()
                                  : thresholds[j];
  }

  // One centroid sweep; returns the largest level movement.
  double lloyd_step() {
    refresh_thresholds();
    double moved = 0.0;
    for (std::size_t j = 0; j < levels.size(); ++j) {
      const double c = cell_centroid(cell_lo(j), cell_hi(j));
      moved = std::max(moved, std::abs(c - levels[j]));
      levels[j] = c;
    }
    return moved;
  }

  // Residual of the stationarity system F_j = c_j - centroid_j(c).
  void residual(std::vector<double>& f) const {
    for (std::size_t j = 0; j < levels.size(); ++j)
      f[j] = levels[j] - cell_centroid(cell_lo(j), cell_hi(j));
  }
};

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (!(v[i] < v[i + 1])) return false;
  return true;
}

// Newton step on the stationarity system. The centroid of cell j depends
// only on the two enclosing thresholds, hence on c_{j-1}, c_j, c_{j+1}:
// the Jacobian is tridiagonal and a Thomas solve gives the step in O(n).
void newton_step(const LloydWork& w, const std::vector<double>& f,
                 std::vector<double>& delta) {
  const std::size_t n = w.levels.size();
  std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = w.cell_lo(j);
    const double b = w.cell_hi(j);
    const double mass = normal_mass(std::isinf(a) ? -38.0 : a, std::isinf(b) ? 38.0 : b);
    const double c = w.levels[j] - f[j];  // current centroid
    double da = 0.0, db = 0.0;            // d(centroid)/d(threshold)
    if (!std::isinf(a)) da = normal_pdf(a) * (c - a) / mass;
    if (!std::isinf(b)) db = normal_pdf(b) * (b - c) / mass;
    if (j > 0) sub[j] = -0.5 * da;
    diag[j] = 1.0 - 0.5 * (da + db);
    if (j + 1 < n) sup[j] = -0.5 * db;
  }
  delta.assign(n, 0.0);
  std::vector<double> cp(n, 0.0), dp(n, 0.0);
  cp[0] = sup[0] / diag[0];
  dp[0] = f[0] / diag[0];
  for (std::size_t j = 1; j < n; ++j) {
    const double m = diag[j] - sub[j] * cp[j - 1];
    cp[j] = sup[j] / m;
    dp[j] = (f[j] - sub[j] * dp[j - 1]) / m;
  }
  delta[n - 1] = dp[n - 1];
  for (std::size_t j = n - 1; j-- > 0;) delta[j] = dp[j] - cp[j] * delta[j + 1];
}

ScalarQuantizer solve_lloyd_max(int bits) {
  const std::size_t n = std::size_t{1} << bits;
  LloydWork w;
  w.levels.resize(n);
  w.thresholds.resize(n - 1);
  // Companding start: levels at quantiles of the asymptotically optimal
  // point density, which for a Gaussian source is N(0,3).
  const double spread = std::sqrt(3.0);
  for (std::size_t j = 0; j < n; ++j)
    w.levels[j] = spread * normal_quantile((j + 0.5) / static_cast<double>(n));

  int iterations = 0;
  // A few plain sweeps pull the start into Newton's basin.
  for (int i = 0; i < 8 && iterations < kMaxIterations; ++i, ++iterations)
    if (w.lloyd_step() < kLevelTol) break;

  std::vector<double> f(n), delta;
  w.refresh_thresholds();
  w.residual(f);
  while (iterations++ < kMaxIterations) {
    newton_step(w, f, delta);
    double step = 1.0;
    std::vector<double> trial(n), ft(n);
    const double f0 = max_abs(f);
    bool accepted = false;
    for (int backtrack = 0; backtrack < 40; ++backtrack, step *= 0.5) {
      for (std::size_t j = 0; j < n; ++j) trial[j] = w.levels[j] - step * delta[j];
      if (!strictly_increasing(trial)) continue;
      LloydWork wt{trial, std::vector<double>(n - 1)};
      wt.refresh_thresholds();
      wt.residual(ft);
      if (max_abs(ft) < f0) {
        w.levels = std::move(wt.levels);
        w.thresholds = std::move(wt.thresholds);
        f = ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Newton rejected everywhere; fall back to one contraction sweep.
      if (w.lloyd_step() < kLevelTol) break;
      w.refresh_thresholds();
      w.residual(f);
      continue;
    }
    if (max_abs(delta) * step < kLevelTol || max_abs(f) < kLevelTol) break;
  }
  if (iterations >= kMaxIterations)
    throw std::runtime_error("Lloyd-Max solver did not converge for bits=" +
                             std::to_string(bits));

  w.refresh_thresholds();

  ScalarQuantizer q;
  q.bits = bits;
  q.levels = w.levels;
  q.thresholds = w.thresholds;
  // Exact distortion from the per-cell Gaussian moments:
  // int_a^b (x-c)^2 phi = [mass + a*phi(a) - b*phi(b)] - 2c[phi(a)-phi(b)] + c^2*mass.
  double mse = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double a = w.cell_lo(j);
    const double b = w.cell_hi(j);
    const double pa = std::isinf(a) ? 0.0 : normal_pdf(a);
    const double pb = std::isinf(b) ? 0.0 : normal_pdf(b);
    const double apa = std::isinf(a) ? 0.0 : a * pa;
    const double bpb = std::isinf(b) ? 0.0 : b * pb;
    const double mass = normal_mass(std::isinf(a) ? -38.0 : a, std::isinf(b) ? 38.0 : b);
    const double c = q.levels[j];
    mse += (mass + apa - bpb) - 2.0 * c * (pa - pb) + c * c * mass;
  }
  q.mse = mse;
  return q;
}

void check_bits_range(int bits) {
  if (bits < 1 || bits > kMaxBits)
    throw std::invalid_argument("quantizer bits must be in [1, " +
                                std::to_string(kMaxBits) + "]");
}

}  // namespace

QuantizerModel QuantizerModel::for_bits(int bits) {
  if (bits == kInfiniteBits) return {kInfiniteBits, 0.0, 1.0};
  check_bits_range(bits);
  const double alpha = distortion_factor(bits);
  return {bits, alpha, 1.0 - alpha};
}

double ScalarQuantizer::quantize(double x) const {
  const auto it = std::upper_bound(thresholds.begin(), thresholds.end(), x);
  return levels[static_cast<std::size_t>(it - thresholds.begin())];
}

double distortion_factor(int bits) {
  check_bits_range(bits);
  static std::array<double, kMaxBits + 1> cache{};
  static std::array<std::once_flag, kMaxBits + 1> flags;
  std::call_once(flags[bits], [bits] { cache[bits] = solve_lloyd_max(bits).mse; });
  return cache[bits];
}

ScalarQuantizer build_scalar_quantizer(int bits) {
  check_bits_range(bits);
  return solve_lloyd_max(bits);
}

Matrix quantize_exact(const Matrix& y, const ScalarQuantizer& q, double gain) {
  if (!(gain > 0.0)) throw std::invalid_argument("AGC gain must be positive");
  return y.unaryExpr([&](Complex v) {
    return Complex(gain * q.quantize(v.real() / gain),
                   gain * q.quantize(v.imag() / gain));
  });
}

double agc_gain(double sum_fading, double power) {
  return std::sqrt(0.5 * (power * sum_fading + 1.0));
}

Vector aqnm_noise_covariance_diag(const Matrix& g, double data_power,
                                  const QuantizerModel& q) {
  const double scale = q.alpha * q.kappa;
  return scale * (data_power * g.rowwise().squaredNorm().array() + 1.0).matrix();
}

double aqnm_noise_variance_approx(double sum_fading, double power) {
  return power * sum_fading + 1.0;
}

}  // namespace lrmimo
