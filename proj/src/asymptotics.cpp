#include "lrmimo/asymptotics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lrmimo/estimation.hpp"
#include "lrmimo/receiver.hpp"

namespace lrmimo {
namespace {

double psi_map_residual(const Vector& dhat, double theta, double antennas, double psi) {
  const double u = theta + psi;
  double s = 0.0;
  for (Eigen::Index k = 0; k < dhat.size(); ++k)
    s += dhat[k] * u / (u + antennas * dhat[k]);
  return psi - s;
}

double theta_closed_form(const SystemConfig& cfg, const QuantizerModel& q) {
  double err_sum = 0.0;
  for (int k = 0; k < cfg.users; ++k) err_sum += error_variance(cfg.fading[k], cfg, q);
  const double sigma2_qu = aqnm_noise_variance_approx(cfg.sum_fading(), cfg.data_power);
  return err_sum + (q.kappa + q.alpha * sigma2_qu) / (q.kappa * cfg.data_power);
}

RateResult constant_rate_result(int users, double rate, RateMethod method) {
  RateResult r;
  r.per_user = Vector::Constant(users, rate);
  r.average = rate;
  r.method = method;
  return r;
}

}  // namespace

double solve_psi(const Vector& dhat, double theta, double antennas) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  const double sum = dhat.sum();
  if (sum == 0.0) return 0.0;

  double lo = 0.0, hi = sum;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (psi_map_residual(dhat, theta, antennas, mid) < 0.0 ? lo : hi) = mid;
  }
  double psi = 0.5 * (lo + hi);
  // Newton polish; f'(psi) = 1 + lambda(psi) > 0 at the root.
  for (int i = 0; i < 4; ++i) {
    const double f = psi_map_residual(dhat, theta, antennas, psi);
    const double fp = 1.0 + lambda_param(dhat, theta, antennas, psi);
    if (fp <= 0.0) break;
    psi -= f / fp;
    psi = std::min(std::max(psi, 0.0), sum);
  }
  const double residual = std::abs(psi_map_residual(dhat, theta, antennas, psi));
  if (!(residual < 1e-12 * std::max(1.0, sum)))
    throw std::runtime_error("psi fixed point did not converge (residual " +
                             std::to_string(residual) + ")");
  return psi;
}

double lambda_param(const Vector& dhat, double theta, double antennas, double psi) {
  const double u = theta + psi;
  double s = 0.0;
  for (Eigen::Index k = 0; k < dhat.size(); ++k) {
    const double q = dhat[k] / (u + antennas * dhat[k]);
    s += q * q;
  }
  return -antennas * s;
}

AsymptoticState asymptotic_state(const SystemConfig& cfg, const QuantizerModel& q) {
  cfg.validate();
  AsymptoticState s;
  s.antennas = cfg.antennas;
  s.users = cfg.users;
  s.theta = theta_closed_form(cfg, q);
  s.dhat.resize(cfg.users);
  for (int k = 0; k < cfg.users; ++k)
    s.dhat[k] = estimate_variance(cfg.fading[k], cfg, q);
  s.psi = solve_psi(s.dhat, s.theta, s.antennas);
  s.lambda = lambda_param(s.dhat, s.theta, s.antennas, s.psi);
  return s;
}

double trace_inv_equivalent(const AsymptoticState& s) {
  return 1.0 / (s.theta + s.psi);
}

double trace_inv_sq_equivalent(const AsymptoticState& s) {
  // -d/dtheta of 1/(theta+psi(theta)): implicit differentiation of the psi
  // fixed point gives 1 + dpsi/dtheta = 1/(1+lambda), so the derivative
  // factor is (1+lambda) with lambda <= 0.
  const double u = s.theta + s.psi;
  return 1.0 / ((1.0 + s.lambda) * u * u);
}

RateResult theorem1_rate(const SystemConfig& cfg, const QuantizerModel& q) {
  const AsymptoticState s = asymptotic_state(cfg, q);
  const double u = s.theta + s.psi;
  const double c = -s.lambda;  // in (0,1); keeps both sign factors cancelling
  const double m = s.antennas;
  const double k = s.users;

  RateResult result;
  result.method = RateMethod::Theorem1;
  result.per_user.resize(cfg.users);
  for (int i = 0; i < cfg.users; ++i) {
    const double s2 = s.dhat[i];
    const double num = s2 * s2 * m * k * u * u * (c - 1.0);
    const double den = (c * s.theta + s.psi * (c - 1.0)) *
                       (s2 * s2 * m * m * s.theta + s.theta * u * u +
                        s2 * u * (k * s.theta + k * s.psi + 2.0 * m * s.theta));
    const double sinr = num / den;
    if (!(sinr > 0.0) || !std::isfinite(sinr)) {
      std::ostringstream msg;
      msg << "asymptotic SINR not positive for user " << i << ": sinr=" << sinr
          << " theta=" << s.theta << " psi=" << s.psi << " lambda=" << s.lambda
          << " sigma2=" << s2 << " M=" << s.antennas << " K=" << s.users;
      throw std::runtime_error(msg.str());
    }
    result.per_user[i] = std::log2(1.0 + sinr);
  }
  result.average = result.per_user.mean();
  return result;
}

double stieltjes_a(double theta, double antennas, double users, double sigma2) {
  if (!(theta > 0.0) || !(sigma2 > 0.0))
    throw std::invalid_argument("theta and sigma2 must be positive");
  const double xi = users / antennas;
  const double ms = antennas * sigma2;
  const double inner = (1.0 - xi) * (1.0 - xi) / (theta * theta) +
                       2.0 * (1.0 + xi) / (ms * theta) + 1.0 / (ms * ms);
  return 0.5 * (std::sqrt(inner) + (1.0 - xi) / theta - 1.0 / ms);
}

double stieltjes_b(double theta, double antennas, double users, double sigma2) {
  if (!(theta > 0.0) || !(sigma2 > 0.0))
    throw std::invalid_argument("theta and sigma2 must be positive");
  const double xi = users / antennas;
  const double ms = antennas * sigma2;
  const double inner = (1.0 - xi) * (1.0 - xi) / (theta * theta) +
                       2.0 * (1.0 + xi) / (ms * theta) + 1.0 / (ms * ms);
  const double d_inner = 2.0 * (1.0 - xi) * (1.0 - xi) / (theta * theta * theta) +
                         2.0 * (1.0 + xi) / (ms * theta * theta);
  return 0.5 * (0.5 * d_inner / std::sqrt(inner) + (1.0 - xi) / (theta * theta));
}

double equal_fading_rate(double antennas, double users, double theta, double sigma2) {
  const double a = stieltjes_a(theta, antennas, users, sigma2);
  const double b = stieltjes_b(theta, antennas, users, sigma2);
  const double signal_space = a - theta * b;  // (1/M)tr(GG^H A^-2) limit, > 0
  if (!(signal_space > 0.0))
    throw std::runtime_error("equal-fading rate: a - theta*b is not positive");
  const double loading = 1.0 + sigma2 * antennas * a;
  const double sinr = antennas * users * sigma2 * sigma2 * a * a /
                      (signal_space * (users * sigma2 + theta * loading * loading));
  if (!(sinr > 0.0) || !std::isfinite(sinr))
    throw std::runtime_error("equal-fading rate: SINR not positive");
  return std::log2(1.0 + sinr);
}

RateResult prop1_rate(const SystemConfig& cfg, const QuantizerModel& q) {
  cfg.validate();
  if (!cfg.equal_fading())
    throw std::invalid_argument(
        "prop1_rate requires equal fading coefficients; use theorem1_rate");
  const double sigma2 = estimate_variance(cfg.fading[0], cfg, q);
  const double theta = theta_closed_form(cfg, q);
  const double rate = equal_fading_rate(cfg.antennas, cfg.users, theta, sigma2);
  return constant_rate_result(cfg.users, rate, RateMethod::Prop1);
}

RateResult remark1_rate(const SystemConfig& cfg) {
  cfg.validate();
  const double tau_pp = cfg.pilot_length * cfg.pilot_power;
  const double sigma2 = tau_pp / (tau_pp + 1.0);
  const double theta = cfg.users / (tau_pp + 1.0) + 1.0 / cfg.data_power;
  const double rate = equal_fading_rate(cfg.antennas, cfg.users, theta, sigma2);
  return constant_rate_result(cfg.users, rate, RateMethod::Remark1);
}

RateResult remark2_rate(const SystemConfig& cfg, const QuantizerModel& q) {
  cfg.validate();
  if (q.is_infinite())
    throw std::invalid_argument("remark2_rate needs a finite bit depth");
  const double kt = q.kappa * cfg.pilot_length;
  const double ka = cfg.users * q.alpha;
  const double sigma2 = kt / (kt + ka);
  const double theta = cfg.users * ka / (kt + ka) + ka / q.kappa;
  const double rate = equal_fading_rate(cfg.antennas, cfg.users, theta, sigma2);
  return constant_rate_result(cfg.users, rate, RateMethod::Remark2);
}

}  // namespace lrmimo
