#pragma once

#include <vector>

#include "lrmimo/types.hpp"

namespace lrmimo {

/// Linearized model of a b-bit ADC: Q(y) ~ kappa*y + q with q Gaussian and
/// independent of y, Var(q) = alpha*kappa*E|y|^2. alpha is the minimum
/// mean-square distortion of the optimal scalar quantizer for a unit-variance
/// Gaussian input (per real dimension) and kappa = 1 - alpha.
struct QuantizerModel {
  int bits = kInfiniteBits;
  double alpha = 0.0;
  double kappa = 1.0;

  /// bits in [1, kMaxBits], or kInfiniteBits for the ideal front end.
  static QuantizerModel for_bits(int bits);
  bool is_infinite() const { return bits == kInfiniteBits; }
};

/// Lloyd-Max quantizer for a unit-variance Gaussian source.
struct ScalarQuantizer {
  int bits = 0;
  std::vector<double> thresholds;  // 2^bits - 1, strictly increasing
  std::vector<double> levels;      // 2^bits, strictly increasing
  double mse = 0.0;                // distortion for N(0,1) input

  /// Nearest reconstruction level; a value sitting exactly on a threshold
  /// resolves upward (so quantize(0) is positive for symmetric designs).
  double quantize(double x) const;
};

/// Distortion factor alpha of the optimal bits-level Gaussian quantizer.
/// Computed once per bit depth and cached. Throws std::invalid_argument for
/// bits outside [1, kMaxBits].
double distortion_factor(int bits);

/// Solves the Lloyd-Max conditions for a unit-variance Gaussian. Throws
/// std::runtime_error if the solver does not reach its tolerance.
ScalarQuantizer build_scalar_quantizer(int bits);

/// Applies `q` independently to the real and imaginary parts of each entry
/// of y/gain, then rescales by gain.
Matrix quantize_exact(const Matrix& y, const ScalarQuantizer& q, double gain);

/// Automatic gain control scale: the analytic per-dimension standard
/// deviation sqrt((power*sum_fading + 1)/2) of the quantizer input, held
/// constant across a simulation.
double agc_gain(double sum_fading, double power);

/// Per-antenna quantizer noise power for one channel realization:
/// alpha*kappa*(p_u*||row m of g||^2 + 1).
Vector aqnm_noise_covariance_diag(const Matrix& g, double data_power,
                                  const QuantizerModel& q);

/// Large-K surrogate for the per-antenna quantizer input power:
/// power*sum_fading + 1. The quantizer noise covariance is then
/// approximately alpha*kappa times this scalar times identity.
double aqnm_noise_variance_approx(double sum_fading, double power);

}  // namespace lrmimo
