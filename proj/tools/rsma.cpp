#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "rsma/io.hpp"
#include "rsma/sweep.hpp"

namespace {

using rsma::json;

constexpr int kExitOk = 0;
constexpr int kExitTrialFailure = 2;
constexpr int kExitConfigError = 3;

rsma::NetworkConfig load_config(const std::string& config_path, const std::string& scenario) {
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw rsma::DomainError("cannot open config file: " + config_path);
    json j;
    in >> j;
    return j.get<rsma::NetworkConfig>();
  }
  if (scenario == "1" || scenario == "scenario1") return rsma::NetworkConfig::scenario1();
  if (scenario == "2" || scenario == "scenario2") return rsma::NetworkConfig::scenario2();
  throw rsma::DomainError("unknown scenario: " + scenario);
}

void apply_thread_cap() {
  if (const char* env = std::getenv("RSMA_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) Eigen::setNbThreads(n);
  } else {
    Eigen::setNbThreads(1);
  }
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw rsma::DomainError("cannot open output file: " + path);
  return file;
}

void print_summary(std::ostream& os, const std::vector<rsma::ResultRow>& rows,
                   const std::vector<std::string>& modes) {
  // per-point means per mode, then pairwise percentage gains on paired means
  std::map<double, std::map<std::string, std::pair<double, int>>> acc;
  for (const auto& r : rows)
    if (r.status == "ok") {
      auto& [sum, cnt] = acc[r.value][r.mode];
      sum += r.objective_bits;
      ++cnt;
    }
  os << "# summary\n";
  for (const auto& [value, per_mode] : acc) {
    os << "# value " << value << ":";
    for (const auto& mode : modes) {
      const auto it = per_mode.find(mode);
      if (it == per_mode.end() || it->second.second == 0) continue;
      os << " " << mode << "=" << it->second.first / it->second.second;
    }
    os << "\n";
    for (std::size_t a = 0; a < modes.size(); ++a)
      for (std::size_t b = a + 1; b < modes.size(); ++b) {
        const auto ia = per_mode.find(modes[a]), ib = per_mode.find(modes[b]);
        if (ia == per_mode.end() || ib == per_mode.end()) continue;
        const double ma = ia->second.first / ia->second.second;
        const double mb = ib->second.first / ib->second.second;
        if (std::abs(mb) > 1e-12)
          os << "#   gain " << modes[a] << " vs " << modes[b] << ": "
             << 100.0 * (ma - mb) / mb << "%\n";
      }
  }
}

} // namespace

int main(int argc, char** argv) {
  apply_thread_cap();

  CLI::App app{"max-min resource allocation simulator for RIS-aided multi-cell MIMO"};
  app.require_subcommand(1);
  app.fallthrough();  // shared options may be given after the subcommand

  std::string config_path, scenario = "1", out_path, format = "csv";
  std::string objective = "rate";
  std::vector<std::string> modes = {"rsma"};
  std::uint64_t seed = 1;
  int trials = 1;

  app.add_option("--config", config_path, "JSON config file (overrides --scenario)");
  app.add_option("--scenario", scenario, "preset scenario: 1 or 2");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--trials", trials, "Monte Carlo trials per point");
  app.add_option("--modes", modes, "mode strings, e.g. rsma tin rsma+noris")->delimiter(',');
  app.add_option("--out", out_path, "output path (default stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--objective", objective, "rate or ee")
      ->check(CLI::IsMember({"rate", "ee"}));

  auto* run = app.add_subcommand("run", "optimize one draw per mode and dump allocations");

  std::string sweep_param = "P_dB";
  std::vector<double> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo parameter sweep");
  sweep->add_option("--param", sweep_param, "P_dB, n, eps, K, N_u or p_c");
  sweep->add_option("--values", sweep_values, "swept values")->delimiter(',')->required();

  std::vector<int> bench_sizes = {4, 8, 16};
  auto* bench = app.add_subcommand("bench", "time one precoder and one phase update");
  bench->add_option("--sizes", bench_sizes, "RIS element counts")->delimiter(',');

  std::string audit_in;
  auto* audit = app.add_subcommand("audit", "re-check a dumped allocation");
  audit->add_option("--in", audit_in, "JSON dump produced by run")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (audit->parsed()) {
      std::ifstream in(audit_in);
      if (!in) throw rsma::DomainError("cannot open audit input: " + audit_in);
      json j;
      in >> j;
      const auto cfg = j.at("config").get<rsma::NetworkConfig>();
      if (const auto err = rsma::validate_config(cfg))
        throw rsma::DomainError("invalid config: " + err->field + ": " + err->reason);
      const auto ch = rsma::draw_channels(cfg, cfg.geometry, j.at("seed").get<std::uint64_t>());
      rsma::OptimizerOptions opts;
      opts.mode = rsma::parse_mode(j.at("mode").get<std::string>());
      opts.objective = j.at("objective").get<std::string>() == "ee"
                           ? rsma::ObjectiveKind::EnergyEfficiency
                           : rsma::ObjectiveKind::SpectralEfficiency;
      const auto alloc = j.at("allocation").get<rsma::Allocation>();
      const auto rep = rsma::evaluate_allocation(cfg, ch, opts, alloc);
      for (const auto& v : rep.violations) std::cerr << "violation: " << v << "\n";
      std::cout << (rep.ok ? "audit: ok" : "audit: failed") << "\n";
      return rep.ok ? kExitOk : kExitTrialFailure;
    }

    rsma::NetworkConfig cfg = load_config(config_path, scenario);
    if (const auto err = rsma::validate_config(cfg))
      throw rsma::DomainError("invalid config: " + err->field + ": " + err->reason);

    rsma::OptimizerOptions opts;
    opts.objective = objective == "ee" ? rsma::ObjectiveKind::EnergyEfficiency
                                       : rsma::ObjectiveKind::SpectralEfficiency;

    if (run->parsed()) {
      for (const auto& mode : modes) (void)rsma::parse_mode(mode);  // validate early
      json dumps = json::array();
      bool any_failed = false;
      for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t trial_seed = rsma::mix_seed(seed, trial);
        const auto ch = rsma::draw_channels(cfg, cfg.geometry, trial_seed);
        for (const auto& mode : modes) {
          rsma::OptimizerOptions mopts = opts;
          mopts.mode = rsma::parse_mode(mode);
          json entry{{"config", cfg},
                     {"seed", trial_seed},
                     {"mode", mode},
                     {"objective", objective}};
          try {
            const auto alloc = rsma::optimize(cfg, ch, mopts, trial_seed);
            const auto rep = rsma::evaluate_allocation(cfg, ch, mopts, alloc);
            entry["allocation"] = alloc;
            entry["objective_bits"] = alloc.objective / rsma::kLn2;
            entry["audit_ok"] = rep.ok;
            if (!rep.ok) any_failed = true;
          } catch (const std::exception& e) {
            entry["status"] = std::string("failed: ") + e.what();
            any_failed = true;
          }
          dumps.push_back(std::move(entry));
        }
      }
      std::ofstream file;
      std::ostream& os = open_out(file, out_path);
      os << (dumps.size() == 1 ? dumps[0].dump(2) : dumps.dump(2)) << "\n";
      return any_failed ? kExitTrialFailure : kExitOk;
    }

    if (sweep->parsed()) {
      rsma::SweepSpec spec;
      spec.param = rsma::sweep_param_from_name(sweep_param);
      spec.values = sweep_values;
      spec.trials = trials;
      spec.master_seed = seed;
      const auto rows = rsma::run_sweep(cfg, spec, modes, opts);
      std::ofstream file;
      std::ostream& os = open_out(file, out_path);
      if (format == "json") {
        json out{{"config", cfg}, {"rows", json::array()}};
        std::ostringstream tmp;
        rsma::write_json(tmp, rows);
        out["rows"] = json::parse(tmp.str());
        os << out.dump(2) << "\n";
      } else {
        rsma::write_csv(os, rows);
      }
      print_summary(out_path.empty() ? std::cerr : std::cout, rows, modes);
      const bool any_failed =
          std::any_of(rows.begin(), rows.end(),
                      [](const rsma::ResultRow& r) { return r.status != "ok"; });
      return any_failed ? kExitTrialFailure : kExitOk;
    }

    if (bench->parsed()) {
      const auto rep = rsma::benchmark_complexity(cfg, bench_sizes, seed);
      std::ofstream file;
      std::ostream& os = open_out(file, out_path);
      os << "n_ris,w_update_ms,ris_update_ms\n";
      for (const auto& p : rep.points)
        os << p.n_ris << "," << p.w_update_ms << "," << p.ris_update_ms << "\n";
      os << "# w_slope " << rep.w_slope << " ris_slope " << rep.ris_slope << "\n";
      return kExitOk;
    }
  } catch (const rsma::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTrialFailure;
  }
  return kExitOk;
}
