#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrmimo/compensation.hpp"
#include "lrmimo/types.hpp"

namespace lrmimo {

/// Experiment recipes behind the CLI subcommands. Every run_* function is a
/// pure function of its spec; output rows are emitted in deterministic order
/// so serialized results are byte-stable across runs and thread counts.

struct RateSweepSpec {
  std::vector<double> snr_grid_db;   // rate-vs-snr grid
  std::vector<int> antenna_grid;     // rate-vs-antennas grid
  std::vector<int> bits_list;        // kInfiniteBits allowed
  int antennas = 100;                // fixed array size for rate-vs-snr
  int users = 50;
  int pilot_length = 0;              // 0 -> users
  int trials = 500;
  std::uint64_t seed = 1;
  std::vector<RateMethod> methods = {RateMethod::MonteCarlo, RateMethod::Prop1};
  SinrMode mode = SinrMode::ApproxDiagonal;
  double fixed_snr_db = 0.0;         // power for rate-vs-antennas

  void validate() const;
};

struct RateRow {
  double snr_db = 0.0;
  int bits = 0;
  RateMethod method = RateMethod::MonteCarlo;
  int antennas = 0;
  int users = 0;
  int pilot_length = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  double avg_rate = 0.0;
  double std_error = 0.0;
};

std::vector<RateRow> run_rate_vs_snr(const RateSweepSpec& spec);
std::vector<RateRow> run_rate_vs_antennas(const RateSweepSpec& spec);

struct CompensationSpec {
  int conv_antennas = 100;
  int users = 50;
  std::vector<int> bits_list = {1, 2, 3};
  std::vector<double> snr_grid_db;
  int max_antennas = 0;  // 0 -> 64 * conv_antennas

  void validate() const;
};

std::vector<CompensationRow> run_compensation(const CompensationSpec& spec);

struct AqnmValidationSpec {
  int antennas = 32;   // capped at 64 to keep the exact-quantizer run small
  int users = 8;
  double snr_db = 0.0;
  std::vector<int> bits_list = {1, 2, 3};
  int trials = 100;
  int symbols = 2000;  // data vectors per trial for the empirical SINR
  std::uint64_t seed = 1;

  void validate() const;
};

struct AqnmValidationRow {
  int bits = 0;
  int antennas = 0;
  int users = 0;
  int pilot_length = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  double exact_rate = 0.0;
  double aqnm_rate = 0.0;
  double rel_gap = 0.0;
};

/// End-to-end rate with the exact scalar quantizer replacing the linearized
/// model in both pilot and data phases; per-user SINR is measured from
/// transmitted symbols against the receiver's nominal signal coefficient.
RateResult exact_quantizer_rate(const SystemConfig& cfg, int trials,
                                int symbols, std::uint64_t base_seed);

std::vector<AqnmValidationRow> run_validate_aqnm(const AqnmValidationSpec& spec);

struct AlphaRow {
  int bits = 0;
  double alpha = 0.0;
  double kappa = 0.0;
};

std::vector<AlphaRow> alpha_table(int max_bits);

/// "inf" for kInfiniteBits, the decimal value otherwise.
std::string bits_label(int bits);

std::string to_csv(const std::vector<RateRow>& rows);
std::string to_csv(const std::vector<CompensationRow>& rows);
std::string to_csv(const std::vector<AqnmValidationRow>& rows);
std::string to_csv(const std::vector<AlphaRow>& rows);

std::string to_json(const std::vector<RateRow>& rows);
std::string to_json(const std::vector<CompensationRow>& rows);
std::string to_json(const std::vector<AqnmValidationRow>& rows);
std::string to_json(const std::vector<AlphaRow>& rows);

}  // namespace lrmimo
