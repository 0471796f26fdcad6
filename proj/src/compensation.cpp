#include "lrmimo/compensation.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "lrmimo/asymptotics.hpp"

namespace lrmimo {
namespace {

double closed_form_rate(int antennas, int users, double power, int bits) {
  const SystemConfig cfg = SystemConfig::symmetric(antennas, users, power, bits);
  return prop1_rate(cfg, QuantizerModel::for_bits(bits)).average;
}

}  // namespace

std::optional<int> min_antennas(const CompensationQuery& query) {
  if (query.conv_antennas < query.users)
    throw std::invalid_argument("conv_antennas must be >= users");
  if (query.max_antennas < query.conv_antennas)
    throw std::invalid_argument("max_antennas must be >= conv_antennas");
  if (!(query.power > 0.0)) throw std::invalid_argument("power must be positive");

  const double target =
      closed_form_rate(query.conv_antennas, query.users, query.power, kInfiniteBits);

  const auto rate = [&](int m) {
    return closed_form_rate(m, query.users, query.power, query.low_bits);
  };

  int lo = query.users;
  int hi = query.max_antennas;
  const double r_lo = rate(lo);
  const double r_hi = rate(hi);
  const double r_mid = rate((lo + hi) / 2);
  if (!(r_lo <= r_mid && r_mid <= r_hi))
    throw std::runtime_error("rate is not monotone in the antenna count");

  if (r_lo >= target) return lo;
  if (r_hi < target) return std::nullopt;

  // Invariant: rate(lo) < target <= rate(hi).
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (rate(mid) >= target ? hi : lo) = mid;
  }
  return hi;
}

std::vector<CompensationRow> eta_sweep(int conv_antennas, int users,
                                       const std::vector<int>& bits_list,
                                       const std::vector<double>& snr_grid_db,
                                       int max_antennas) {
  if (conv_antennas < users)
    throw std::invalid_argument("conv_antennas must be >= users");
  if (max_antennas < conv_antennas)
    throw std::invalid_argument("max_antennas must be >= conv_antennas");
  for (int bits : bits_list) QuantizerModel::for_bits(bits);
  for (double snr : snr_grid_db)
    if (!(db_to_linear(snr) > 0.0))
      throw std::invalid_argument("SNR grid entry out of range");

  const int n_snr = static_cast<int>(snr_grid_db.size());
  const int n_bits = static_cast<int>(bits_list.size());
  std::vector<CompensationRow> rows(static_cast<std::size_t>(n_snr) * n_bits);
  std::string failure;

#pragma omp parallel for schedule(dynamic)
  for (int idx = 0; idx < n_snr * n_bits; ++idx) {
    const int i = idx / n_bits;
    const int j = idx % n_bits;
    try {
      CompensationQuery query;
      query.conv_antennas = conv_antennas;
      query.users = users;
      query.power = db_to_linear(snr_grid_db[i]);
      query.low_bits = bits_list[j];
      query.max_antennas = max_antennas;

      CompensationRow row;
      row.snr_db = snr_grid_db[i];
      row.bits = bits_list[j];
      row.conv_antennas = conv_antennas;
      row.users = users;
      row.low_antennas = min_antennas(query);
      row.attainable = row.low_antennas.has_value();
      row.eta = row.attainable
                    ? static_cast<double>(*row.low_antennas) / conv_antennas
                    : 0.0;
      rows[idx] = row;
    } catch (const std::exception& e) {
#pragma omp critical
      failure = e.what();
    }
  }
  if (!failure.empty()) throw std::runtime_error("eta sweep failed: " + failure);
  return rows;
}

}  // namespace lrmimo
