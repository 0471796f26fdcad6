#pragma once

#include "lrmimo/quantizer.hpp"
#include "lrmimo/types.hpp"

namespace lrmimo {

/// State of the deterministic-equivalent evaluation: the fixed point psi,
/// the derivative parameter lambda (<= 0) and the per-user estimate
/// variances dhat. The resolvent traces of A = ghat*ghat^H + theta*I
/// concentrate around
///   (1/M) tr(A^-1)  -> 1/(theta+psi)
///   (1/M) tr(A^-2)  -> 1/((1+lambda)*(theta+psi)^2),
/// the second being -d/dtheta of the first.
struct AsymptoticState {
  double theta = 0.0;
  double psi = 0.0;
  double lambda = 0.0;
  Vector dhat;
  int antennas = 0;
  int users = 0;
};

/// Unique positive root of
///   psi = sum_k dhat_k*(theta+psi)/((theta+psi) + antennas*dhat_k),
/// found by bracketed bisection on (0, sum(dhat)] with a Newton polish.
/// Throws std::runtime_error if the residual tolerance is not met.
double solve_psi(const Vector& dhat, double theta, double antennas);

/// lambda = -antennas * sum_k dhat_k^2 / ((theta+psi) + antennas*dhat_k)^2.
double lambda_param(const Vector& dhat, double theta, double antennas, double psi);

AsymptoticState asymptotic_state(const SystemConfig& cfg, const QuantizerModel& q);

double trace_inv_equivalent(const AsymptoticState& s);
double trace_inv_sq_equivalent(const AsymptoticState& s);

/// General-fading deterministic equivalent of the per-user rate. Numerator
/// and denominator are evaluated separately and the SINR is checked positive
/// before the log; a nonpositive argument raises std::runtime_error carrying
/// the full state.
RateResult theorem1_rate(const SystemConfig& cfg, const QuantizerModel& q);

/// Equal-fading closed forms for the normalized resolvent traces,
/// with xi = users/antennas:
///   a = (1/M) tr(A^-1) limit,  b = (1/M) tr(A^-2) limit = -da/dtheta.
double stieltjes_a(double theta, double antennas, double users, double sigma2);
double stieltjes_b(double theta, double antennas, double users, double sigma2);

struct StieltjesPair {
  double a = 0.0;
  double b = 0.0;
  double xi = 0.0;
  double sigma2 = 0.0;
};

/// Equal-fading rate
///   log2(1 + M*K*sigma^4*a^2 / ((a - theta*b)*(K*sigma^2
///        + theta*(1 + sigma^2*M*a)^2))).
/// Shared kernel behind prop1_rate and the two limit forms.
double equal_fading_rate(double antennas, double users, double theta, double sigma2);

/// Equal-fading deterministic equivalent; throws std::invalid_argument when
/// the fading coefficients differ (use theorem1_rate instead).
RateResult prop1_rate(const SystemConfig& cfg, const QuantizerModel& q);

/// Infinite-resolution limit: equal_fading_rate at
///   sigma2 = tau*p_p/(tau*p_p+1),  theta = K/(tau*p_p+1) + 1/p_u.
RateResult remark1_rate(const SystemConfig& cfg);

/// Infinite-power limit at fixed resolution: equal_fading_rate at
///   sigma2 = kappa*tau/(kappa*tau + K*alpha),
///   theta  = K^2*alpha/(kappa*tau + K*alpha) + K*alpha/kappa.
/// Independent of the transmit powers in cfg.
RateResult remark2_rate(const SystemConfig& cfg, const QuantizerModel& q);

}  // namespace lrmimo
