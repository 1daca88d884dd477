#pragma once

#include <iosfwd>

#include "rsma/optimizer.hpp"

namespace rsma {

enum class SweepParam { PowerDb, BlockLength, Epsilon, UsersPerCell, RxAntennas, StaticPower };

std::string sweep_param_name(SweepParam p);
SweepParam sweep_param_from_name(const std::string& name);

struct SweepSpec {
  SweepParam param = SweepParam::PowerDb;
  std::vector<double> values;
  int trials = 1;
  std::uint64_t master_seed = 1;
};

struct ResultRow {
  std::string sweep_param;
  double value = 0.0;
  std::string mode;
  std::uint64_t seed = 0;
  double objective_bits = 0.0;  // b/s/Hz (rate) or b/J scale (energy)
  int iterations = 0;
  double wall_ms = 0.0;
  std::string status = "ok";
};

// Mode strings compose with '+': base "rsma" or "tin", modifiers "noris",
// "randomris", "shannon", "singlestream". Throws DomainError on unknown tokens.
ModeFlags parse_mode(const std::string& mode);

// Applies one sweep value to a copy of the base configuration. PowerDb is in
// dB (stored linearly); Epsilon is the overall error target, split evenly
// between the common and private stages.
NetworkConfig apply_sweep_value(const NetworkConfig& base, SweepParam p, double value);

// Paired design: every mode sees the identical channel draw per (value, trial);
// per-trial failures become status rows instead of aborting the sweep.
std::vector<ResultRow> run_sweep(const NetworkConfig& base, const SweepSpec& spec,
                                 const std::vector<std::string>& modes,
                                 const OptimizerOptions& base_opts);

// Exact column order: sweep_param,value,mode,seed,objective_bits,iterations,
// wall_ms,status. Doubles print with 17 significant digits.
void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_json(std::ostream& os, const std::vector<ResultRow>& rows);

struct ComplexityPoint {
  int n_ris = 0;
  double w_update_ms = 0.0;
  double ris_update_ms = 0.0;
};

struct ComplexityReport {
  std::vector<ComplexityPoint> points;
  double w_slope = 0.0;    // log-log regression of the precoder update
  double ris_slope = 0.0;  // log-log regression of the phase update
};

// Times one precoder update and one phase update per RIS size.
ComplexityReport benchmark_complexity(const NetworkConfig& base,
                                      const std::vector<int>& n_ris_values,
                                      std::uint64_t seed);

} // namespace rsma
