#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "lrmimo/channel.hpp"
#include "lrmimo/estimation.hpp"
#include "lrmimo/rng.hpp"

using namespace lrmimo;

namespace {

// Kronecker product, only needed at toy sizes for the full-covariance oracle.
Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::VectorXcd vectorize(const Matrix& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

}  // namespace

TEST_CASE("DFT pilots") {
  SUBCASE("degenerate single pilot") {
    const auto p = dft_pilots(1, 1);
    CHECK(p.f(0, 0) == Complex(1.0, 0.0));
  }
  SUBCASE("two-point block") {
    const auto p = dft_pilots(2, 2);
    CHECK(std::abs(p.f(0, 0) - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(p.f(0, 1) - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(p.f(1, 0) - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(p.f(1, 1) - Complex(-1, 0)) < 1e-12);
  }
  SUBCASE("orthogonality and unit magnitude at tau=50") {
    const auto p = dft_pilots(50, 50);
    const Matrix gram = p.f.adjoint() * p.f;
    CHECK((gram - 50.0 * Matrix::Identity(50, 50)).norm() < 1e-9);
    CHECK(std::abs(p.f.cwiseAbs().maxCoeff() - 1.0) < 1e-12);
    CHECK(std::abs(p.f.cwiseAbs().minCoeff() - 1.0) < 1e-12);
  }
  SUBCASE("rectangular block keeps orthogonality") {
    const auto p = dft_pilots(16, 5);
    CHECK((p.f.adjoint() * p.f - 16.0 * Matrix::Identity(5, 5)).norm() < 1e-10);
  }
  SUBCASE("more users than pilots is rejected") {
    CHECK_THROWS_AS(dft_pilots(4, 5), std::invalid_argument);
  }
}

TEST_CASE("pilot signal variance identity") {
  // total per-entry variance kappa^2*sigma2 + alpha*kappa*sigma2 = kappa*sigma2
  // with sigma2 = p_p*K + 1 for unit fading and tau = K
  const int m = 64, k = 8;
  SystemConfig cfg = SystemConfig::symmetric(m, k, 1.0, 1);
  const auto q = QuantizerModel::for_bits(1);
  const auto pilots = dft_pilots(cfg.pilot_length, cfg.users);
  double acc = 0.0;
  const int reps = 200;
  for (int rep = 0; rep < reps; ++rep) {
    const auto chan = sample_channel(cfg, 3000 + rep);
    const Matrix zp = quantized_pilot_signal(chan.g, pilots, cfg, q, 9000 + rep);
    acc += zp.squaredNorm() / (m * k);
  }
  const double expected = q.kappa * (1.0 * k + 1.0);
  CHECK(acc / reps == doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("pilot signal without quantization is signal plus AWGN") {
  const int m = 64, k = 8;
  SystemConfig cfg = SystemConfig::symmetric(m, k, 1.0, kInfiniteBits);
  const auto q = QuantizerModel::for_bits(kInfiniteBits);
  const auto pilots = dft_pilots(k, k);

  SUBCASE("determinism") {
    const auto chan = sample_channel(cfg, 5);
    const Matrix a = quantized_pilot_signal(chan.g, pilots, cfg, q, 17);
    const Matrix b = quantized_pilot_signal(chan.g, pilots, cfg, q, 17);
    CHECK(a == b);
  }
  SUBCASE("residual after removing the signal part is unit-variance noise") {
    double acc = 0.0;
    const int reps = 200;
    for (int rep = 0; rep < reps; ++rep) {
      const auto chan = sample_channel(cfg, 4000 + rep);
      const Matrix zp = quantized_pilot_signal(chan.g, pilots, cfg, q, 8000 + rep);
      const Matrix resid = zp - (chan.g * pilots.f.transpose());
      acc += resid.squaredNorm() / (m * k);
    }
    CHECK(acc / reps == doctest::Approx(1.0).epsilon(0.03));
  }
  SUBCASE("zero pilot power leaves pure noise") {
    cfg.pilot_power = 0.0;
    double acc = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      const auto chan = sample_channel(cfg, 100 + rep);
      acc += quantized_pilot_signal(chan.g, pilots, cfg, q, rep).squaredNorm() / (m * k);
    }
    CHECK(acc / 100 == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("estimate variance closed forms") {
  SUBCASE("ideal ADC at tau*p_p = 50") {
    SystemConfig cfg = SystemConfig::symmetric(16, 50, 1.0, kInfiniteBits);
    const auto q = QuantizerModel::for_bits(kInfiniteBits);
    CHECK(estimate_variance(1.0, cfg, q) ==
          doctest::Approx(50.0 / 51.0).epsilon(1e-12));
  }
  SUBCASE("one-bit value at the reference operating point") {
    SystemConfig cfg = SystemConfig::symmetric(16, 50, 1.0, 1);
    const auto q = QuantizerModel::for_bits(1);
    // hand-evaluated: kappa^2*50/(kappa^2*50 + kappa^2 + kappa*alpha*51)
    CHECK(estimate_variance(1.0, cfg, q) == doctest::Approx(0.624137032).epsilon(1e-6));
  }
  SUBCASE("vanishing pilot power") {
    SystemConfig cfg = SystemConfig::symmetric(16, 4, 1.0, 2);
    cfg.pilot_power = 0.0;
    const auto q = QuantizerModel::for_bits(2);
    CHECK(estimate_variance(1.0, cfg, q) == 0.0);
    CHECK(error_variance(1.0, cfg, q) == 1.0);
  }
  SUBCASE("infinite pilot power saturates at the finite-resolution limit") {
    SystemConfig cfg = SystemConfig::symmetric(16, 50, 1.0, 1);
    cfg.pilot_power = 1e13;
    cfg.data_power = 1e13;
    const auto q = QuantizerModel::for_bits(1);
    const double limit = q.kappa * 50.0 / (q.kappa * 50.0 + 50.0 * q.alpha);
    CHECK(estimate_variance(1.0, cfg, q) == doctest::Approx(limit).epsilon(1e-10));
  }
  SUBCASE("ideal ADC reaches perfect CSI as pilot energy grows") {
    SystemConfig cfg = SystemConfig::symmetric(16, 4, 1.0, kInfiniteBits);
    cfg.pilot_power = 1e12;
    const auto q = QuantizerModel::for_bits(kInfiniteBits);
    CHECK(estimate_variance(1.0, cfg, q) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("variance sum identity and monotonicity") {
    for (int bits : {1, 2, 3, 8, kInfiniteBits}) {
      SystemConfig cfg = SystemConfig::symmetric(16, 8, 0.7, bits);
      const auto q = QuantizerModel::for_bits(bits);
      const double hat = estimate_variance(1.3, cfg, q);
      const double err = error_variance(1.3, cfg, q);
      CHECK(hat + err == doctest::Approx(1.3).epsilon(1e-15));
      CHECK(hat > 0.0);
      CHECK(hat <= 1.3);
    }
    // increasing in pilot power, pilot length and resolution
    const auto var_at = [](double pp, int tau, int bits) {
      SystemConfig cfg = SystemConfig::symmetric(16, 8, 1.0, bits);
      cfg.pilot_power = pp;
      cfg.pilot_length = tau;
      return estimate_variance(1.0, cfg, QuantizerModel::for_bits(bits));
    };
    CHECK(var_at(2.0, 8, 2) > var_at(1.0, 8, 2));
    CHECK(var_at(1.0, 16, 2) > var_at(1.0, 8, 2));
    CHECK(var_at(1.0, 8, 2) > var_at(1.0, 8, 1));
    CHECK(var_at(1.0, 8, 3) > var_at(1.0, 8, 2));
    CHECK(var_at(1.0, 8, kInfiniteBits) >= var_at(1.0, 8, 12));
  }
}

TEST_CASE("scalar estimator equals the full vectorized LMMSE on a toy system") {
  // Full-covariance oracle at M=2, K=2, tau=2: ghat = kappa*sqrt(p_p) *
  // Sigma_g * Fbar^H * Sigma_zp^{-1} * zp with Fbar = F (x) I, built densely.
  SystemConfig cfg;
  cfg.antennas = 2;
  cfg.users = 2;
  cfg.pilot_length = 2;
  cfg.pilot_power = 0.8;
  cfg.data_power = 1.0;
  cfg.fading = Vector(2);
  cfg.fading << 1.0, 2.5;
  cfg.adc_bits = 1;
  const auto q = QuantizerModel::for_bits(1);
  const auto pilots = dft_pilots(2, 2);
  const auto chan = sample_channel(cfg, 31);
  const Matrix zp = quantized_pilot_signal(chan.g, pilots, cfg, q, 77);

  const ChannelEstimate est = lmmse_estimate(zp, pilots, cfg, q);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = cfg.fading[0];
  d(1, 1) = cfg.fading[1];
  const Matrix i2 = Matrix::Identity(2, 2);
  const Matrix fbar = kron(pilots.f, i2);            // (M*tau) x (M*K)
  const Matrix sigma_g = kron(d, i2);                // (M*K) x (M*K)
  const double s_qp = aqnm_noise_variance_approx(cfg.sum_fading(), cfg.pilot_power);
  const Matrix sigma_zp = q.kappa * q.kappa * cfg.pilot_power * fbar * sigma_g *
                              fbar.adjoint() +
                          (q.kappa * q.kappa + q.alpha * q.kappa * s_qp) *
                              Matrix::Identity(4, 4);
  const Eigen::VectorXcd zp_vec = vectorize(zp);
  const Eigen::VectorXcd ghat_vec = q.kappa * std::sqrt(cfg.pilot_power) * sigma_g *
                                    fbar.adjoint() * sigma_zp.inverse() * zp_vec;
  const Eigen::VectorXcd scalar_vec = vectorize(est.ghat);
  CHECK((ghat_vec - scalar_vec).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("estimate is uncorrelated with its error and has the stated variance") {
  SystemConfig cfg = SystemConfig::symmetric(64, 4, 1.0, 2);
  cfg.pilot_length = 8;
  const auto q = QuantizerModel::for_bits(2);
  const auto pilots = dft_pilots(cfg.pilot_length, cfg.users);

  const int trials = 6000;
  Eigen::MatrixXcd cross = Eigen::MatrixXcd::Zero(cfg.antennas, cfg.users);
  Eigen::MatrixXd hat_pow = Eigen::MatrixXd::Zero(cfg.antennas, cfg.users);
  Eigen::MatrixXd err_pow = Eigen::MatrixXd::Zero(cfg.antennas, cfg.users);
  for (int t = 0; t < trials; ++t) {
    const auto chan = sample_channel(cfg, rng::mix(555, 2 * t));
    const Matrix zp =
        quantized_pilot_signal(chan.g, pilots, cfg, q, rng::mix(555, 2 * t + 1));
    const ChannelEstimate est = lmmse_estimate(zp, pilots, cfg, q);
    const Matrix err = chan.g - est.ghat;
    cross += est.ghat.cwiseProduct(err.conjugate());
    hat_pow += est.ghat.cwiseAbs2();
    err_pow += err.cwiseAbs2();
  }

  SUBCASE("orthogonality") {
    // mean |correlation| between estimate and error across entries
    double mean_corr = 0.0;
    for (int k = 0; k < cfg.users; ++k)
      for (int m = 0; m < cfg.antennas; ++m)
        mean_corr += std::abs(cross(m, k) / double(trials)) /
                     (std::sqrt(hat_pow(m, k) / trials) *
                      std::sqrt(err_pow(m, k) / trials));
    CHECK(mean_corr / (cfg.antennas * cfg.users) < 0.02);
  }

  SUBCASE("variance match") {
    const ChannelEstimate stats =
        lmmse_estimate(Matrix::Zero(cfg.antennas, cfg.pilot_length), pilots, cfg, q);
    for (int k = 0; k < cfg.users; ++k) {
      const double emp = hat_pow.col(k).sum() / (trials * cfg.antennas);
      CHECK(emp == doctest::Approx(stats.sigma2_hat[k]).epsilon(0.03));
      const double emp_err = err_pow.col(k).sum() / (trials * cfg.antennas);
      CHECK(emp_err == doctest::Approx(stats.sigma2_err[k]).epsilon(0.03));
    }
  }
}

TEST_CASE("lmmse_estimate validates dimensions") {
  SystemConfig cfg = SystemConfig::symmetric(8, 4, 1.0, 2);
  const auto q = QuantizerModel::for_bits(2);
  const auto pilots = dft_pilots(4, 4);
  CHECK_THROWS_AS(lmmse_estimate(Matrix::Zero(8, 5), pilots, cfg, q),
                  std::invalid_argument);
}
