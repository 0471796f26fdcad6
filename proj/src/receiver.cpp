#include "lrmimo/receiver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <omp.h>

#include "lrmimo/channel.hpp"
#include "lrmimo/rng.hpp"

namespace lrmimo {
namespace {

// Stream ids hung off each per-trial seed.
constexpr std::uint64_t kChannelStream = 1;
constexpr std::uint64_t kPilotStream = 2;

Eigen::LLT<Matrix> factor_receiver_matrix(const Matrix& ghat, double theta) {
  const auto antennas = ghat.rows();
  Matrix a = theta * Matrix::Identity(antennas, antennas);
  a.selfadjointView<Eigen::Lower>().rankUpdate(ghat);
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("receiver matrix is not positive definite");
  return llt;
}

ChannelEstimate closed_form_estimate_stats(const SystemConfig& cfg,
                                           const QuantizerModel& q) {
  ChannelEstimate est;
  est.sigma2_hat.resize(cfg.users);
  est.sigma2_err.resize(cfg.users);
  for (int k = 0; k < cfg.users; ++k) {
    est.sigma2_hat[k] = estimate_variance(cfg.fading[k], cfg, q);
    est.sigma2_err[k] = cfg.fading[k] - est.sigma2_hat[k];
  }
  return est;
}

RateResult reduce_trials(const Eigen::MatrixXd& rates, int trials) {
  RateResult result;
  result.method = RateMethod::MonteCarlo;
  result.trials = trials;
  result.per_user = rates.rowwise().mean();
  result.average = result.per_user.mean();
  if (trials > 1) {
    const Vector trial_avg = rates.colwise().mean();
    const double mean = trial_avg.mean();
    const double var = (trial_avg.array() - mean).square().sum() / (trials - 1);
    result.std_error = std::sqrt(var / trials);
  }
  return result;
}

template <bool Parallel>
RateResult run_monte_carlo(const SystemConfig& cfg, int trials,
                           std::uint64_t base_seed, SinrMode mode) {
  cfg.validate();
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const QuantizerModel q = QuantizerModel::for_bits(cfg.adc_bits);
  const PilotMatrix pilots = dft_pilots(cfg.pilot_length, cfg.users);
  EffectiveNoiseParams noise = effective_noise(cfg, closed_form_estimate_stats(cfg, q), q);
  noise.mode = mode;

  // Each trial fills its own column; the reduction below runs serially in
  // trial order, so the result does not depend on the thread count.
  Eigen::MatrixXd rates(cfg.users, trials);
  std::string failure;
  if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < trials; ++t) {
      try {
        rates.col(t) = monte_carlo_trial(cfg, pilots, q, noise, rng::mix(base_seed, t));
      } catch (const std::exception& e) {
#pragma omp critical
        failure = e.what();
      }
    }
  } else {
    for (int t = 0; t < trials; ++t)
      rates.col(t) = monte_carlo_trial(cfg, pilots, q, noise, rng::mix(base_seed, t));
  }
  if (!failure.empty()) throw std::runtime_error("Monte-Carlo trial failed: " + failure);
  return reduce_trials(rates, trials);
}

}  // namespace

EffectiveNoiseParams effective_noise(const SystemConfig& cfg,
                                     const ChannelEstimate& est,
                                     const QuantizerModel& q) {
  if (!(cfg.data_power > 0.0))
    throw std::invalid_argument("effective noise undefined for zero data power");
  EffectiveNoiseParams params;
  params.sigma2_qu = aqnm_noise_variance_approx(cfg.sum_fading(), cfg.data_power);
  params.theta = est.sigma2_err.sum() +
                 (q.kappa + q.alpha * params.sigma2_qu) / (q.kappa * cfg.data_power);
  return params;
}

Matrix mmse_receiver(const Matrix& ghat, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  return factor_receiver_matrix(ghat, theta).solve(ghat);
}

Vector sinr_per_user(const SystemConfig& cfg, const ChannelEstimate& est,
                     const EffectiveNoiseParams& noise, const QuantizerModel& q,
                     const Matrix* g_true) {
  if (noise.mode == SinrMode::ExactDiagonal && g_true == nullptr)
    throw std::invalid_argument("ExactDiagonal SINR needs the true channel");
  if (!(noise.theta > 0.0)) throw std::invalid_argument("theta must be positive");

  const auto llt = factor_receiver_matrix(est.ghat, noise.theta);
  const Matrix w = llt.solve(est.ghat);                // receiver columns
  const Matrix s = est.ghat.adjoint() * w;             // s(k,j) = ghat_k^H A^-1 ghat_j
  const Vector w_norm2 = w.colwise().squaredNorm();

  const int users = cfg.users;
  Vector sinr(users);
  if (noise.mode == SinrMode::ApproxDiagonal) {
    for (int k = 0; k < users; ++k) {
      const double signal = std::norm(s(k, k));
      const double interference = s.row(k).squaredNorm() - signal;
      sinr[k] = signal / (interference + noise.theta * w_norm2[k]);
    }
  } else {
    const Vector quant_diag = aqnm_noise_covariance_diag(*g_true, cfg.data_power, q);
    const Eigen::MatrixXd w_abs2 = w.cwiseAbs2();
    const Vector aqn_quant = w_abs2.transpose() * quant_diag;
    const double err_sum = est.sigma2_err.sum();
    const double k2p = q.kappa * q.kappa * cfg.data_power;
    for (int k = 0; k < users; ++k) {
      const double signal = std::norm(s(k, k));
      const double interference = s.row(k).squaredNorm() - signal;
      const double aqn = q.kappa * q.kappa * w_norm2[k] + aqn_quant[k];
      sinr[k] = k2p * signal / (k2p * interference + k2p * err_sum * w_norm2[k] + aqn);
    }
  }
  return sinr;
}

Vector monte_carlo_trial(const SystemConfig& cfg, const PilotMatrix& pilots,
                         const QuantizerModel& q,
                         const EffectiveNoiseParams& noise,
                         std::uint64_t trial_seed) {
  const ChannelRealization chan = sample_channel(cfg, rng::mix(trial_seed, kChannelStream));
  const Matrix zp =
      quantized_pilot_signal(chan.g, pilots, cfg, q, rng::mix(trial_seed, kPilotStream));
  const ChannelEstimate est = lmmse_estimate(zp, pilots, cfg, q);
  const Matrix* g_true = noise.mode == SinrMode::ExactDiagonal ? &chan.g : nullptr;
  const Vector sinr = sinr_per_user(cfg, est, noise, q, g_true);
  return sinr.unaryExpr([](double v) { return std::log2(1.0 + v); });
}

RateResult monte_carlo_rate(const SystemConfig& cfg, int trials,
                            std::uint64_t base_seed, SinrMode mode) {
  return run_monte_carlo<true>(cfg, trials, base_seed, mode);
}

RateResult monte_carlo_rate_serial(const SystemConfig& cfg, int trials,
                                   std::uint64_t base_seed, SinrMode mode) {
  return run_monte_carlo<false>(cfg, trials, base_seed, mode);
}

}  // namespace lrmimo
