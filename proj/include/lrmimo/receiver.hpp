#pragma once

#include <cstdint>

#include "lrmimo/estimation.hpp"
#include "lrmimo/types.hpp"

namespace lrmimo {

/// Regularizer of the quantization-aware MMSE receiver. theta folds the
/// total estimation-error power, the AWGN and the (large-K surrogate of the)
/// quantizer noise into one scalar:
///   theta = sum_k sigma2_err[k] + (kappa + alpha*sigma2_qu) / (kappa*p_u).
struct EffectiveNoiseParams {
  double theta = 0.0;
  double sigma2_qu = 0.0;  // p_u * sum_fading + 1
  SinrMode mode = SinrMode::ApproxDiagonal;
};

EffectiveNoiseParams effective_noise(const SystemConfig& cfg,
                                     const ChannelEstimate& est,
                                     const QuantizerModel& q);

/// Receiver columns r_k = (ghat*ghat^H + theta*I)^{-1} ghat_k, computed with
/// one Cholesky factorization shared by all users.
Matrix mmse_receiver(const Matrix& ghat, double theta);

/// Per-user SINR of the MMSE receiver for one realization.
/// ApproxDiagonal needs only the estimate; ExactDiagonal additionally needs
/// the true channel to evaluate the per-antenna quantizer noise diagonal
/// (the physical quantizer noise is conditioned on the true channel).
Vector sinr_per_user(const SystemConfig& cfg, const ChannelEstimate& est,
                     const EffectiveNoiseParams& noise, const QuantizerModel& q,
                     const Matrix* g_true = nullptr);

/// Ergodic-rate estimator: draws a channel, runs the quantized pilot phase,
/// estimates, builds the receiver and accumulates log2(1+SINR) per user.
/// Deterministic for a fixed base_seed, independent of thread count.
/// The trial loop is OpenMP-parallel; monte_carlo_rate_serial is the plain
/// loop kept as a reference for testing and benchmarking.
RateResult monte_carlo_rate(const SystemConfig& cfg, int trials,
                            std::uint64_t base_seed, SinrMode mode);
RateResult monte_carlo_rate_serial(const SystemConfig& cfg, int trials,
                                   std::uint64_t base_seed, SinrMode mode);

/// One Monte-Carlo trial (exposed for the serial/parallel drivers and tests).
Vector monte_carlo_trial(const SystemConfig& cfg, const PilotMatrix& pilots,
                         const QuantizerModel& q,
                         const EffectiveNoiseParams& noise,
                         std::uint64_t trial_seed);

}  // namespace lrmimo
