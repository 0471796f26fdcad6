// Command-line front end: emits rate sweeps, antenna-compensation tables and
// quantizer diagnostics as CSV or JSON.
//
// Exit codes: 0 success, 2 usage error, 1 numerical or I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "lrmimo/sweep.hpp"

namespace {

using namespace lrmimo;

std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  std::vector<double> grid;
  for (double v = start; v <= stop + 1e-9 * std::abs(step); v += step)
    grid.push_back(v);
  if (grid.empty()) throw std::invalid_argument("grid is empty");
  return grid;
}

std::vector<int> make_int_grid(int start, int stop, int step) {
  if (step <= 0) throw std::invalid_argument("grid step must be positive");
  std::vector<int> grid;
  for (int v = start; v <= stop; v += step) grid.push_back(v);
  if (grid.empty()) throw std::invalid_argument("grid is empty");
  return grid;
}

std::vector<int> parse_bits_list(const std::string& text) {
  std::vector<int> bits;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "inf")
      bits.push_back(kInfiniteBits);
    else
      bits.push_back(std::stoi(item));
  }
  if (bits.empty()) throw std::invalid_argument("bits list is empty");
  return bits;
}

std::vector<RateMethod> parse_methods(const std::string& text) {
  std::vector<RateMethod> methods;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "mc") methods.push_back(RateMethod::MonteCarlo);
    else if (item == "theorem1") methods.push_back(RateMethod::Theorem1);
    else if (item == "prop1") methods.push_back(RateMethod::Prop1);
    else if (item == "remark1") methods.push_back(RateMethod::Remark1);
    else if (item == "remark2") methods.push_back(RateMethod::Remark2);
    else throw std::invalid_argument("unknown method: " + item);
  }
  if (methods.empty()) throw std::invalid_argument("methods list is empty");
  return methods;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

struct CommonOutput {
  std::string out = "-";
  std::string format = "csv";
};

void add_output_flags(CLI::App* cmd, CommonOutput& common) {
  cmd->add_option("--out", common.out, "Output path ('-' for stdout)");
  cmd->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uplink rate experiments for coarsely quantized massive MIMO"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "OpenMP thread count (0 = runtime default)");

  // rate-vs-snr
  auto* snr_cmd = app.add_subcommand("rate-vs-snr", "Average rate over an SNR grid");
  double snr_start = -20.0, snr_stop = 20.0, snr_step = 5.0;
  RateSweepSpec snr_spec;
  std::string snr_bits = "1,2,3,inf";
  std::string snr_methods = "mc,prop1";
  CommonOutput snr_out;
  snr_cmd->add_option("--snr-start", snr_start, "Grid start, dB");
  snr_cmd->add_option("--snr-stop", snr_stop, "Grid stop, dB");
  snr_cmd->add_option("--snr-step", snr_step, "Grid step, dB");
  snr_cmd->add_option("--m", snr_spec.antennas, "Base-station antennas");
  snr_cmd->add_option("--k", snr_spec.users, "Users");
  snr_cmd->add_option("--tau", snr_spec.pilot_length, "Pilot length (0 = users)");
  snr_cmd->add_option("--bits", snr_bits, "Comma list of ADC bits; 'inf' allowed");
  snr_cmd->add_option("--trials", snr_spec.trials, "Monte-Carlo trials");
  snr_cmd->add_option("--seed", snr_spec.seed, "Base seed");
  snr_cmd->add_option("--method", snr_methods,
                      "Comma list of mc,theorem1,prop1,remark1,remark2");
  add_output_flags(snr_cmd, snr_out);

  // rate-vs-antennas
  auto* ant_cmd = app.add_subcommand("rate-vs-antennas", "Average rate over an antenna grid");
  int m_start = 50, m_stop = 500, m_step = 25;
  RateSweepSpec ant_spec;
  std::string ant_bits = "1,2,inf";
  std::string ant_methods = "mc,prop1";
  CommonOutput ant_out;
  ant_cmd->add_option("--m-start", m_start, "Grid start");
  ant_cmd->add_option("--m-stop", m_stop, "Grid stop");
  ant_cmd->add_option("--m-step", m_step, "Grid step");
  ant_cmd->add_option("--snr", ant_spec.fixed_snr_db, "Transmit power, dB");
  ant_cmd->add_option("--k", ant_spec.users, "Users");
  ant_cmd->add_option("--tau", ant_spec.pilot_length, "Pilot length (0 = users)");
  ant_cmd->add_option("--bits", ant_bits, "Comma list of ADC bits; 'inf' allowed");
  ant_cmd->add_option("--trials", ant_spec.trials, "Monte-Carlo trials");
  ant_cmd->add_option("--seed", ant_spec.seed, "Base seed");
  ant_cmd->add_option("--method", ant_methods,
                      "Comma list of mc,theorem1,prop1,remark1,remark2");
  add_output_flags(ant_cmd, ant_out);

  // compensation
  auto* comp_cmd = app.add_subcommand(
      "compensation", "Antenna count matching an ideal-ADC reference rate");
  double comp_snr_start = -20.0, comp_snr_stop = 20.0, comp_snr_step = 5.0;
  CompensationSpec comp_spec;
  std::string comp_bits = "1,2,3";
  CommonOutput comp_out;
  comp_cmd->add_option("--snr-start", comp_snr_start, "Grid start, dB");
  comp_cmd->add_option("--snr-stop", comp_snr_stop, "Grid stop, dB");
  comp_cmd->add_option("--snr-step", comp_snr_step, "Grid step, dB");
  comp_cmd->add_option("--m-conv", comp_spec.conv_antennas, "Reference antennas");
  comp_cmd->add_option("--k", comp_spec.users, "Users");
  comp_cmd->add_option("--m-max", comp_spec.max_antennas,
                       "Search ceiling (0 = 64 * m-conv)");
  comp_cmd->add_option("--bits", comp_bits, "Comma list of finite ADC bits");
  add_output_flags(comp_cmd, comp_out);

  // validate-aqnm
  auto* val_cmd = app.add_subcommand(
      "validate-aqnm", "Exact-quantizer end-to-end rate vs the linearized model");
  AqnmValidationSpec val_spec;
  std::string val_bits = "1,2,3";
  CommonOutput val_out;
  val_cmd->add_option("--m", val_spec.antennas, "Antennas (<= 64)");
  val_cmd->add_option("--k", val_spec.users, "Users");
  val_cmd->add_option("--snr", val_spec.snr_db, "Transmit power, dB");
  val_cmd->add_option("--bits", val_bits, "Comma list of finite ADC bits");
  val_cmd->add_option("--trials", val_spec.trials, "Channel realizations");
  val_cmd->add_option("--symbols", val_spec.symbols, "Data vectors per realization");
  val_cmd->add_option("--seed", val_spec.seed, "Base seed");
  add_output_flags(val_cmd, val_out);

  // alpha-table
  auto* alpha_cmd =
      app.add_subcommand("alpha-table", "Distortion factors of the optimal quantizer");
  int alpha_max_bits = 8;
  CommonOutput alpha_out;
  alpha_cmd->add_option("--max-bits", alpha_max_bits, "Largest bit depth");
  add_output_flags(alpha_cmd, alpha_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (threads > 0) omp_set_num_threads(threads);

    if (snr_cmd->parsed()) {
      snr_spec.snr_grid_db = make_grid(snr_start, snr_stop, snr_step);
      snr_spec.bits_list = parse_bits_list(snr_bits);
      snr_spec.methods = parse_methods(snr_methods);
      const auto rows = run_rate_vs_snr(snr_spec);
      write_output(snr_out.out,
                   snr_out.format == "csv" ? to_csv(rows) : to_json(rows));
    } else if (ant_cmd->parsed()) {
      ant_spec.antenna_grid = make_int_grid(m_start, m_stop, m_step);
      ant_spec.bits_list = parse_bits_list(ant_bits);
      ant_spec.methods = parse_methods(ant_methods);
      const auto rows = run_rate_vs_antennas(ant_spec);
      write_output(ant_out.out,
                   ant_out.format == "csv" ? to_csv(rows) : to_json(rows));
    } else if (comp_cmd->parsed()) {
      comp_spec.snr_grid_db = make_grid(comp_snr_start, comp_snr_stop, comp_snr_step);
      comp_spec.bits_list = parse_bits_list(comp_bits);
      const auto rows = run_compensation(comp_spec);
      write_output(comp_out.out,
                   comp_out.format == "csv" ? to_csv(rows) : to_json(rows));
    } else if (val_cmd->parsed()) {
      val_spec.bits_list = parse_bits_list(val_bits);
      const auto rows = run_validate_aqnm(val_spec);
      write_output(val_out.out,
                   val_out.format == "csv" ? to_csv(rows) : to_json(rows));
    } else if (alpha_cmd->parsed()) {
      const auto rows = alpha_table(alpha_max_bits);
      write_output(alpha_out.out,
                   alpha_out.format == "csv" ? to_csv(rows) : to_json(rows));
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
