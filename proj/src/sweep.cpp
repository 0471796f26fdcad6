#include "lrmimo/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "lrmimo/asymptotics.hpp"
#include "lrmimo/channel.hpp"
#include "lrmimo/estimation.hpp"
#include "lrmimo/quantizer.hpp"
#include "lrmimo/receiver.hpp"
#include "lrmimo/rng.hpp"

namespace lrmimo {
namespace {

using json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string fmt_seed(std::uint64_t v) { return std::to_string(v); }

int effective_pilot_length(const RateSweepSpec& spec) {
  return spec.pilot_length > 0 ? spec.pilot_length : spec.users;
}

SystemConfig make_config(const RateSweepSpec& spec, int antennas, double power, int bits) {
  SystemConfig cfg = SystemConfig::symmetric(antennas, spec.users, power, bits);
  cfg.pilot_length = effective_pilot_length(spec);
  return cfg;
}

bool wants_monte_carlo(const RateSweepSpec& spec) {
  return std::find(spec.methods.begin(), spec.methods.end(), RateMethod::MonteCarlo) !=
         spec.methods.end();
}

RateRow make_row(const RateSweepSpec& spec, double snr_db, int bits, int antennas,
                 const RateResult& result) {
  RateRow row;
  row.snr_db = snr_db;
  row.bits = bits;
  row.method = result.method;
  row.antennas = antennas;
  row.users = spec.users;
  row.pilot_length = effective_pilot_length(spec);
  row.trials = result.trials;
  row.seed = spec.seed;
  row.avg_rate = result.average;
  row.std_error = result.std_error;
  return row;
}

// One grid point, all requested methods. remark2 has no infinite-bit limit
// and is skipped for that combination.
void append_point(std::vector<RateRow>& rows, const RateSweepSpec& spec,
                  double snr_db, int bits, int antennas) {
  const double power = db_to_linear(snr_db);
  const SystemConfig cfg = make_config(spec, antennas, power, bits);
  const QuantizerModel q = QuantizerModel::for_bits(bits);
  for (RateMethod method : spec.methods) {
    switch (method) {
      case RateMethod::MonteCarlo:
        rows.push_back(make_row(spec, snr_db, bits, antennas,
                                monte_carlo_rate(cfg, spec.trials, spec.seed, spec.mode)));
        break;
      case RateMethod::Theorem1:
        rows.push_back(make_row(spec, snr_db, bits, antennas, theorem1_rate(cfg, q)));
        break;
      case RateMethod::Prop1:
        rows.push_back(make_row(spec, snr_db, bits, antennas, prop1_rate(cfg, q)));
        break;
      case RateMethod::Remark1:
        rows.push_back(make_row(spec, snr_db, bits, antennas, remark1_rate(cfg)));
        break;
      case RateMethod::Remark2:
        if (bits != kInfiniteBits)
          rows.push_back(make_row(spec, snr_db, bits, antennas, remark2_rate(cfg, q)));
        break;
    }
  }
}

}  // namespace

void RateSweepSpec::validate() const {
  if (users < 1) throw std::invalid_argument("users must be >= 1");
  if (pilot_length != 0 && pilot_length < users)
    throw std::invalid_argument("pilot_length must be 0 (auto) or >= users");
  if (bits_list.empty()) throw std::invalid_argument("bits list must be nonempty");
  for (int bits : bits_list) QuantizerModel::for_bits(bits);
  if (methods.empty()) throw std::invalid_argument("methods list must be nonempty");
  if (wants_monte_carlo(*this) && trials < 1)
    throw std::invalid_argument("trials must be >= 1 when the mc method is requested");
}

std::vector<RateRow> run_rate_vs_snr(const RateSweepSpec& spec) {
  spec.validate();
  if (spec.snr_grid_db.empty()) throw std::invalid_argument("SNR grid must be nonempty");
  if (spec.antennas < spec.users)
    throw std::invalid_argument("antennas must be >= users");
  std::vector<RateRow> rows;
  for (double snr_db : spec.snr_grid_db)
    for (int bits : spec.bits_list) append_point(rows, spec, snr_db, bits, spec.antennas);
  return rows;
}

std::vector<RateRow> run_rate_vs_antennas(const RateSweepSpec& spec) {
  spec.validate();
  if (spec.antenna_grid.empty())
    throw std::invalid_argument("antenna grid must be nonempty");
  for (int m : spec.antenna_grid)
    if (m < spec.users) throw std::invalid_argument("antenna grid entries must be >= users");
  std::vector<RateRow> rows;
  for (int antennas : spec.antenna_grid)
    for (int bits : spec.bits_list)
      append_point(rows, spec, spec.fixed_snr_db, bits, antennas);
  return rows;
}

void CompensationSpec::validate() const {
  if (users < 1) throw std::invalid_argument("users must be >= 1");
  if (conv_antennas < users)
    throw std::invalid_argument("conv_antennas must be >= users");
  if (bits_list.empty() || snr_grid_db.empty())
    throw std::invalid_argument("bits list and SNR grid must be nonempty");
}

std::vector<CompensationRow> run_compensation(const CompensationSpec& spec) {
  spec.validate();
  const int max_antennas =
      spec.max_antennas > 0 ? spec.max_antennas : 64 * spec.conv_antennas;
  return eta_sweep(spec.conv_antennas, spec.users, spec.bits_list, spec.snr_grid_db,
                   max_antennas);
}

RateResult exact_quantizer_rate(const SystemConfig& cfg, int trials, int symbols,
                                std::uint64_t base_seed) {
  cfg.validate();
  if (cfg.adc_bits == kInfiniteBits)
    throw std::invalid_argument("exact quantizer path needs a finite bit depth");
  if (trials < 1 || symbols < 1)
    throw std::invalid_argument("trials and symbols must be >= 1");

  const QuantizerModel q = QuantizerModel::for_bits(cfg.adc_bits);
  const ScalarQuantizer quant = build_scalar_quantizer(cfg.adc_bits);
  const PilotMatrix pilots = dft_pilots(cfg.pilot_length, cfg.users);
  const double gain_pilot = agc_gain(cfg.sum_fading(), cfg.pilot_power);
  const double gain_data = agc_gain(cfg.sum_fading(), cfg.data_power);
  const double sqrt_pp = std::sqrt(cfg.pilot_power);
  const double sqrt_pu = std::sqrt(cfg.data_power);

  ChannelEstimate stats;
  stats.sigma2_hat.resize(cfg.users);
  stats.sigma2_err.resize(cfg.users);
  for (int k = 0; k < cfg.users; ++k) {
    stats.sigma2_hat[k] = estimate_variance(cfg.fading[k], cfg, q);
    stats.sigma2_err[k] = cfg.fading[k] - stats.sigma2_hat[k];
  }
  const EffectiveNoiseParams noise = effective_noise(cfg, stats, q);

  Eigen::MatrixXd rates(cfg.users, trials);
  std::string failure;
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < trials; ++t) {
    try {
      const std::uint64_t trial_seed = rng::mix(base_seed, t);
      const ChannelRealization chan = sample_channel(cfg, rng::mix(trial_seed, 1));

      // Pilot phase through the real quantizer; same AWGN stream as the
      // linearized path so the two runs share randomness.
      Matrix yp = sqrt_pp * (chan.g * pilots.f.transpose());
      rng::Generator pilot_gen(rng::mix(trial_seed, 2));
      for (int c = 0; c < cfg.pilot_length; ++c)
        for (int m = 0; m < cfg.antennas; ++m) yp(m, c) += pilot_gen.complex_gaussian();
      const Matrix zp = quantize_exact(yp, quant, gain_pilot);
      const ChannelEstimate est = lmmse_estimate(zp, pilots, cfg, q);

      const Matrix w = mmse_receiver(est.ghat, noise.theta);
      const Matrix s = est.ghat.adjoint() * w;

      // Data phase: empirical SINR against the receiver's nominal signal
      // coefficient kappa*sqrt(p_u)*r_k^H ghat_k.
      rng::Generator data_gen(rng::mix(trial_seed, 3));
      Matrix x(cfg.users, symbols);
      for (int c = 0; c < symbols; ++c)
        for (int k = 0; k < cfg.users; ++k) x(k, c) = data_gen.complex_gaussian();
      Matrix y = sqrt_pu * (chan.g * x);
      for (int c = 0; c < symbols; ++c)
        for (int m = 0; m < cfg.antennas; ++m) y(m, c) += data_gen.complex_gaussian();
      const Matrix z = quantize_exact(y, quant, gain_data);
      const Matrix xhat = w.adjoint() * z;

      for (int k = 0; k < cfg.users; ++k) {
        const double h_nom = q.kappa * sqrt_pu * s(k, k).real();
        const double err =
            (xhat.row(k) - h_nom * x.row(k)).squaredNorm() / symbols;
        rates(k, t) = std::log2(1.0 + h_nom * h_nom / err);
      }
    } catch (const std::exception& e) {
#pragma omp critical
      failure = e.what();
    }
  }
  if (!failure.empty())
    throw std::runtime_error("exact quantizer trial failed: " + failure);

  RateResult result;
  result.method = RateMethod::MonteCarlo;
  result.trials = trials;
  result.per_user = rates.rowwise().mean();
  result.average = result.per_user.mean();
  const Vector trial_avg = rates.colwise().mean();
  if (trials > 1) {
    const double mean = trial_avg.mean();
    const double var = (trial_avg.array() - mean).square().sum() / (trials - 1);
    result.std_error = std::sqrt(var / trials);
  }
  return result;
}

void AqnmValidationSpec::validate() const {
  if (antennas < 1 || users < 1) throw std::invalid_argument("bad dimensions");
  if (antennas > 64)
    throw std::invalid_argument(
        "validate-aqnm is capped at 64 antennas (exact-quantizer runs are heavy)");
  if (antennas < users) throw std::invalid_argument("antennas must be >= users");
  if (trials < 1 || symbols < 1)
    throw std::invalid_argument("trials and symbols must be >= 1");
  for (int bits : bits_list)
    if (bits == kInfiniteBits)
      throw std::invalid_argument("validate-aqnm bits list must be finite");
    else
      QuantizerModel::for_bits(bits);
}

std::vector<AqnmValidationRow> run_validate_aqnm(const AqnmValidationSpec& spec) {
  spec.validate();
  const double power = db_to_linear(spec.snr_db);
  std::vector<AqnmValidationRow> rows;
  for (int bits : spec.bits_list) {
    const SystemConfig cfg = SystemConfig::symmetric(spec.antennas, spec.users, power, bits);
    const RateResult exact = exact_quantizer_rate(cfg, spec.trials, spec.symbols, spec.seed);
    const RateResult aqnm =
        monte_carlo_rate(cfg, spec.trials, spec.seed, SinrMode::ExactDiagonal);
    AqnmValidationRow row;
    row.bits = bits;
    row.antennas = spec.antennas;
    row.users = spec.users;
    row.pilot_length = cfg.pilot_length;
    row.trials = spec.trials;
    row.seed = spec.seed;
    row.exact_rate = exact.average;
    row.aqnm_rate = aqnm.average;
    row.rel_gap = std::abs(exact.average - aqnm.average) / aqnm.average;
    rows.push_back(row);
  }
  // Ideal front end: no quantizer, so the "exact" path is the linearized
  // path itself and the gap is zero by construction.
  {
    const SystemConfig cfg =
        SystemConfig::symmetric(spec.antennas, spec.users, power, kInfiniteBits);
    const RateResult aqnm =
        monte_carlo_rate(cfg, spec.trials, spec.seed, SinrMode::ExactDiagonal);
    AqnmValidationRow row;
    row.bits = kInfiniteBits;
    row.antennas = spec.antennas;
    row.users = spec.users;
    row.pilot_length = cfg.pilot_length;
    row.trials = spec.trials;
    row.seed = spec.seed;
    row.exact_rate = aqnm.average;
    row.aqnm_rate = aqnm.average;
    row.rel_gap = 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::vector<AlphaRow> alpha_table(int max_bits) {
  if (max_bits < 1 || max_bits > kMaxBits)
    throw std::invalid_argument("max_bits out of range");
  std::vector<AlphaRow> rows;
  for (int bits = 1; bits <= max_bits; ++bits) {
    const double alpha = distortion_factor(bits);
    rows.push_back({bits, alpha, 1.0 - alpha});
  }
  return rows;
}

std::string bits_label(int bits) {
  return bits == kInfiniteBits ? "inf" : std::to_string(bits);
}

std::string to_csv(const std::vector<RateRow>& rows) {
  std::string out = "snr_db,bits,method,m,k,tau,trials,seed,avg_rate,stderr\n";
  for (const auto& r : rows) {
    out += fmt(r.snr_db) + ',' + bits_label(r.bits) + ',' + to_string(r.method) + ',' +
           std::to_string(r.antennas) + ',' + std::to_string(r.users) + ',' +
           std::to_string(r.pilot_length) + ',' + std::to_string(r.trials) + ',' +
           fmt_seed(r.seed) + ',' + fmt(r.avg_rate) + ',' + fmt(r.std_error) + '\n';
  }
  return out;
}

std::string to_csv(const std::vector<CompensationRow>& rows) {
  std::string out = "snr_db,bits,m_conv,k,m_low,eta,attainable\n";
  for (const auto& r : rows) {
    out += fmt(r.snr_db) + ',' + bits_label(r.bits) + ',' +
           std::to_string(r.conv_antennas) + ',' + std::to_string(r.users) + ',';
    if (r.attainable)
      out += std::to_string(*r.low_antennas) + ',' + fmt(r.eta) + ",true\n";
    else
      out += ",,false\n";
  }
  return out;
}

std::string to_csv(const std::vector<AqnmValidationRow>& rows) {
  std::string out = "bits,m,k,tau,trials,seed,exact_rate,aqnm_rate,rel_gap\n";
  for (const auto& r : rows) {
    out += bits_label(r.bits) + ',' + std::to_string(r.antennas) + ',' +
           std::to_string(r.users) + ',' + std::to_string(r.pilot_length) + ',' +
           std::to_string(r.trials) + ',' + fmt_seed(r.seed) + ',' +
           fmt(r.exact_rate) + ',' + fmt(r.aqnm_rate) + ',' + fmt(r.rel_gap) + '\n';
  }
  return out;
}

std::string to_csv(const std::vector<AlphaRow>& rows) {
  std::string out = "bits,alpha,kappa\n";
  for (const auto& r : rows) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g\n", r.bits, r.alpha, r.kappa);
    out += buf;
  }
  return out;
}

namespace {

json bits_json(int bits) {
  return bits == kInfiniteBits ? json("inf") : json(bits);
}

}  // namespace

std::string to_json(const std::vector<RateRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"snr_db", r.snr_db},
                   {"bits", bits_json(r.bits)},
                   {"method", to_string(r.method)},
                   {"m", r.antennas},
                   {"k", r.users},
                   {"tau", r.pilot_length},
                   {"trials", r.trials},
                   {"seed", r.seed},
                   {"avg_rate", r.avg_rate},
                   {"stderr", r.std_error}});
  return arr.dump(2) + "\n";
}

std::string to_json(const std::vector<CompensationRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json obj = {{"snr_db", r.snr_db},
                {"bits", bits_json(r.bits)},
                {"m_conv", r.conv_antennas},
                {"k", r.users}};
    obj["m_low"] = r.attainable ? json(*r.low_antennas) : json(nullptr);
    obj["eta"] = r.attainable ? json(r.eta) : json(nullptr);
    obj["attainable"] = r.attainable;
    arr.push_back(obj);
  }
  return arr.dump(2) + "\n";
}

std::string to_json(const std::vector<AqnmValidationRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"bits", bits_json(r.bits)},
                   {"m", r.antennas},
                   {"k", r.users},
                   {"tau", r.pilot_length},
                   {"trials", r.trials},
                   {"seed", r.seed},
                   {"exact_rate", r.exact_rate},
                   {"aqnm_rate", r.aqnm_rate},
                   {"rel_gap", r.rel_gap}});
  return arr.dump(2) + "\n";
}

std::string to_json(const std::vector<AlphaRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"bits", r.bits}, {"alpha", r.alpha}, {"kappa", r.kappa}});
  return arr.dump(2) + "\n";
}

}  // namespace lrmimo
