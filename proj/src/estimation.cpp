#include "lrmimo/estimation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lrmimo/rng.hpp"

namespace lrmimo {

PilotMatrix dft_pilots(int pilot_length, int users) {
  if (pilot_length < 1 || users < 1)
    throw std::invalid_argument("pilot dimensions must be positive");
  if (users > pilot_length)
    throw std::invalid_argument("orthogonal pilots require users <= pilot_length");
  Matrix f(pilot_length, users);
  const double step = -2.0 * std::numbers::pi / pilot_length;
  for (int n = 0; n < users; ++n)
    for (int m = 0; m < pilot_length; ++m) {
      // reduce m*n mod tau first so the phase stays accurate for large grids
      const auto mn = static_cast<long long>(m) * n % pilot_length;
      f(m, n) = std::polar(1.0, step * static_cast<double>(mn));
    }
  return {std::move(f)};
}

Matrix quantized_pilot_signal(const Matrix& g, const PilotMatrix& pilots,
                              const SystemConfig& cfg, const QuantizerModel& q,
                              std::uint64_t seed) {
  const int antennas = static_cast<int>(g.rows());
  const int tau = static_cast<int>(pilots.f.rows());
  Matrix zp = (q.kappa * std::sqrt(cfg.pilot_power)) * (g * pilots.f.transpose());

  rng::Generator gen(seed);
  for (int t = 0; t < tau; ++t)
    for (int m = 0; m < antennas; ++m) zp(m, t) += q.kappa * gen.complex_gaussian();

  if (q.alpha > 0.0) {
    const double sigma2_qp = aqnm_noise_variance_approx(cfg.sum_fading(), cfg.pilot_power);
    const double scale = std::sqrt(q.alpha * q.kappa * sigma2_qp);
    for (int t = 0; t < tau; ++t)
      for (int m = 0; m < antennas; ++m) zp(m, t) += scale * gen.complex_gaussian();
  }
  return zp;
}

ChannelEstimate lmmse_estimate(const Matrix& zp, const PilotMatrix& pilots,
                               const SystemConfig& cfg, const QuantizerModel& q) {
  if (zp.cols() != pilots.f.rows() || pilots.f.cols() != cfg.users ||
      cfg.pilot_length != pilots.f.rows())
    throw std::invalid_argument("pilot signal dimensions inconsistent with config");

  const double sigma2_qp = aqnm_noise_variance_approx(cfg.sum_fading(), cfg.pilot_power);
  const double tau_pp = cfg.pilot_length * cfg.pilot_power;

  ChannelEstimate est;
  est.ghat.resize(zp.rows(), cfg.users);
  est.sigma2_hat.resize(cfg.users);
  est.sigma2_err.resize(cfg.users);

  const Matrix projected = zp * pilots.f.conjugate();  // antennas x users
  for (int k = 0; k < cfg.users; ++k) {
    const double d = cfg.fading[k];
    const double denom =
        q.kappa * q.kappa * tau_pp * d + q.kappa * q.kappa + q.kappa * q.alpha * sigma2_qp;
    const double c = q.kappa * std::sqrt(cfg.pilot_power) * d / denom;
    est.ghat.col(k) = c * projected.col(k);
    est.sigma2_hat[k] = estimate_variance(d, cfg, q);
    est.sigma2_err[k] = d - est.sigma2_hat[k];
  }
  return est;
}

double estimate_variance(double d_k, const SystemConfig& cfg, const QuantizerModel& q) {
  if (!(d_k > 0.0)) throw std::invalid_argument("fading coefficient must be positive");
  const double sigma2_qp = aqnm_noise_variance_approx(cfg.sum_fading(), cfg.pilot_power);
  const double tau_pp = cfg.pilot_length * cfg.pilot_power;
  const double num = q.kappa * q.kappa * tau_pp * d_k * d_k;
  const double den =
      q.kappa * q.kappa * tau_pp * d_k + q.kappa * q.kappa + q.kappa * q.alpha * sigma2_qp;
  return num / den;
}

double error_variance(double d_k, const SystemConfig& cfg, const QuantizerModel& q) {
  return d_k - estimate_variance(d_k, cfg, q);
}

}  // namespace lrmimo
