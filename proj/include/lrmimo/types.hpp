#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>

namespace lrmimo {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

/// ADC resolution sentinel: an unquantized (ideal) front end.
inline constexpr int kInfiniteBits = 0;
/// Largest supported finite ADC resolution.
inline constexpr int kMaxBits = 12;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Scenario parameters for one uplink configuration. Powers are normalized
/// to unit noise variance; `fading` holds the per-user large-scale
/// coefficients d_k.
struct SystemConfig {
  int antennas = 0;          // base-station antennas
  int users = 0;             // single-antenna users
  int pilot_length = 0;      // orthogonal pilots require pilot_length >= users
  double pilot_power = 0.0;
  double data_power = 0.0;
  Vector fading;             // length == users, all entries > 0
  int adc_bits = kInfiniteBits;

  void validate() const;
  double sum_fading() const { return fading.sum(); }
  bool equal_fading() const;

  /// The common experiment shape: p_p = p_u = power, pilot_length = users,
  /// unit fading for every user.
  static SystemConfig symmetric(int antennas, int users, double power, int adc_bits);
};

enum class RateMethod { MonteCarlo, Theorem1, Prop1, Remark1, Remark2 };

/// How the per-realization quantizer noise enters the SINR: replaced by its
/// large-K diagonal surrogate, or kept as the exact per-antenna diagonal.
enum class SinrMode { ApproxDiagonal, ExactDiagonal };

struct RateResult {
  Vector per_user;          // bits/s/Hz
  double average = 0.0;     // mean over users
  double std_error = 0.0;   // standard error over trials; 0 for closed forms
  RateMethod method = RateMethod::MonteCarlo;
  int trials = 0;
};

const char* to_string(RateMethod method);

}  // namespace lrmimo
