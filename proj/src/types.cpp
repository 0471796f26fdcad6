#include "lrmimo/types.hpp"

#include <stdexcept>
#include <string>

namespace lrmimo {

void SystemConfig::validate() const {
  if (antennas < 1) throw std::invalid_argument("antennas must be >= 1");
  if (users < 1) throw std::invalid_argument("users must be >= 1");
  if (pilot_length < users)
    throw std::invalid_argument("orthogonal pilots require pilot_length >= users");
  if (pilot_power < 0.0 || data_power < 0.0)
    throw std::invalid_argument("powers must be nonnegative");
  if (fading.size() != users)
    throw std::invalid_argument("fading must have one entry per user");
  for (Eigen::Index k = 0; k < fading.size(); ++k)
    if (!(fading[k] > 0.0))
      throw std::invalid_argument("fading coefficients must be positive");
  if (adc_bits != kInfiniteBits && (adc_bits < 1 || adc_bits > kMaxBits))
    throw std::invalid_argument("adc_bits must be in [1, " + std::to_string(kMaxBits) +
                                "] or kInfiniteBits");
}

bool SystemConfig::equal_fading() const {
  if (fading.size() == 0) return true;
  const double lo = fading.minCoeff();
  const double hi = fading.maxCoeff();
  return hi - lo <= 1e-12 * std::max(1.0, hi);
}

SystemConfig SystemConfig::symmetric(int antennas, int users, double power, int adc_bits) {
  SystemConfig cfg;
  cfg.antennas = antennas;
  cfg.users = users;
  cfg.pilot_length = users;
  cfg.pilot_power = power;
  cfg.data_power = power;
  cfg.fading = Vector::Ones(users);
  cfg.adc_bits = adc_bits;
  return cfg;
}

const char* to_string(RateMethod method) {
  switch (method) {
    case RateMethod::MonteCarlo: return "mc";
    case RateMethod::Theorem1: return "theorem1";
    case RateMethod::Prop1: return "prop1";
    case RateMethod::Remark1: return "remark1";
    case RateMethod::Remark2: return "remark2";
  }
  return "unknown";
}

}  // namespace lrmimo
