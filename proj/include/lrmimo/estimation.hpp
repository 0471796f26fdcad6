#pragma once

#include <cstdint>

#include "lrmimo/quantizer.hpp"
#include "lrmimo/types.hpp"

namespace lrmimo {

/// Orthogonal pilot block: f is pilot_length x users with f^H f = tau * I.
struct PilotMatrix {
  Matrix f;
};

struct ChannelEstimate {
  Matrix ghat;        // antennas x users
  Vector sigma2_hat;  // per-user per-entry estimate variance
  Vector sigma2_err;  // per-user error variance; sigma2_hat + sigma2_err = d_k
};

/// First `users` columns of the pilot_length-point DFT matrix,
/// entries exp(-2*pi*i*m*n/pilot_length).
PilotMatrix dft_pilots(int pilot_length, int users);

/// Quantized received pilot block under the linearized ADC model:
/// kappa*sqrt(p_p)*g*f^T + kappa*N + Q, with N iid unit complex Gaussian and
/// Q iid complex Gaussian of per-entry variance
/// alpha*kappa*(p_p*sum_fading + 1). Deterministic per seed.
Matrix quantized_pilot_signal(const Matrix& g, const PilotMatrix& pilots,
                              const SystemConfig& cfg, const QuantizerModel& q,
                              std::uint64_t seed);

/// Per-user scalar LMMSE estimator. With orthogonal pilots the joint
/// estimator decouples: ghat_k = c_k * (zp * conj(f_k)) with
/// c_k = kappa*sqrt(p_p)*d_k / (kappa^2*tau*p_p*d_k + kappa^2
///       + kappa*alpha*(p_p*sum_fading + 1)).
ChannelEstimate lmmse_estimate(const Matrix& zp, const PilotMatrix& pilots,
                               const SystemConfig& cfg, const QuantizerModel& q);

/// Closed-form per-entry variance of the LMMSE estimate for a user with
/// large-scale coefficient d_k.
double estimate_variance(double d_k, const SystemConfig& cfg, const QuantizerModel& q);

/// d_k minus estimate_variance.
double error_variance(double d_k, const SystemConfig& cfg, const QuantizerModel& q);

}  // namespace lrmimo
