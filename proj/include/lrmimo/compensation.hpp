#pragma once

#include <optional>
#include <vector>

#include "lrmimo/types.hpp"

namespace lrmimo {

/// Antenna-compensation problem: the smallest low-resolution array that
/// matches the rate of an ideal-ADC array of conv_antennas elements, at
/// common power p_p = p_u = power and pilot_length = users.
struct CompensationQuery {
  int conv_antennas = 0;
  int users = 0;
  double power = 0.0;
  int low_bits = 1;
  int max_antennas = 0;  // search ceiling
};

/// Smallest integer M in [users, max_antennas] with
/// rate(M, low_bits) >= rate(conv_antennas, infinite bits), by monotone
/// integer bisection (monotonicity spot-checked on the bracket). Returns
/// nullopt when even max_antennas falls short.
std::optional<int> min_antennas(const CompensationQuery& query);

struct CompensationRow {
  double snr_db = 0.0;
  int bits = 0;
  int conv_antennas = 0;
  int users = 0;
  std::optional<int> low_antennas;
  double eta = 0.0;  // low_antennas / conv_antennas; meaningless if unattainable
  bool attainable = false;
};

/// One min_antennas solve per (snr, bits) grid point. Grid points run in
/// parallel; rows come back ordered by (snr, bits).
std::vector<CompensationRow> eta_sweep(int conv_antennas, int users,
                                       const std::vector<int>& bits_list,
                                       const std::vector<double>& snr_grid_db,
                                       int max_antennas);

}  // namespace lrmimo
