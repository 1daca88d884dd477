#include "rsma/sweep.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace rsma {

std::string sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::PowerDb: return "P_dB";
    case SweepParam::BlockLength: return "n";
    case SweepParam::Epsilon: return "eps";
    case SweepParam::UsersPerCell: return "K";
    case SweepParam::RxAntennas: return "N_u";
    case SweepParam::StaticPower: return "p_c";
  }
  return "?";
}

SweepParam sweep_param_from_name(const std::string& name) {
  if (name == "P_dB") return SweepParam::PowerDb;
  if (name == "n") return SweepParam::BlockLength;
  if (name == "eps") return SweepParam::Epsilon;
  if (name == "K") return SweepParam::UsersPerCell;
  if (name == "N_u") return SweepParam::RxAntennas;
  if (name == "p_c") return SweepParam::StaticPower;
  throw DomainError("unknown sweep parameter: " + name);
}

ModeFlags parse_mode(const std::string& mode) {
  ModeFlags f;
  std::stringstream ss(mode);
  std::string tok;
  bool any = false;
  while (std::getline(ss, tok, '+')) {
    std::transform(tok.begin(), tok.end(), tok.begin(), ::tolower);
    if (tok.empty()) continue;
    any = true;
    if (tok == "rsma")
      f.common_enabled = true;
    else if (tok == "tin" || tok == "sdma")
      f.common_enabled = false;
    else if (tok == "noris")
      f.no_ris = true;
    else if (tok == "randomris")
      f.random_ris = true;
    else if (tok == "shannon")
      f.shannon_design = true;
    else if (tok == "singlestream")
      f.single_stream = true;
    else
      throw DomainError("unknown mode token: " + tok);
  }
  if (!any) throw DomainError("empty mode string");
  return f;
}

NetworkConfig apply_sweep_value(const NetworkConfig& base, SweepParam p, double value) {
  NetworkConfig cfg = base;
  switch (p) {
    case SweepParam::PowerDb: cfg.P = std::pow(10.0, value / 10.0); break;
    case SweepParam::BlockLength: cfg.n = value; break;
    case SweepParam::Epsilon:
      cfg.eps_c = value / 2.0;
      cfg.eps_p = value / 2.0;
      break;
    case SweepParam::UsersPerCell: cfg.K = static_cast<int>(std::lround(value)); break;
    case SweepParam::RxAntennas: cfg.N_u = static_cast<int>(std::lround(value)); break;
    case SweepParam::StaticPower: cfg.p_c = value; break;
  }
  if (const auto err = validate_config(cfg))
    throw DomainError("sweep value makes the configuration invalid: " + err->field +
                      ": " + err->reason);
  return cfg;
}

std::vector<ResultRow> run_sweep(const NetworkConfig& base, const SweepSpec& spec,
                                 const std::vector<std::string>& modes,
                                 const OptimizerOptions& base_opts) {
  std::vector<ResultRow> rows;
  const std::string pname = sweep_param_name(spec.param);
  for (const double value : spec.values) {
    const NetworkConfig cfg = apply_sweep_value(base, spec.param, value);
    for (int trial = 0; trial < spec.trials; ++trial) {
      const std::uint64_t seed = mix_seed(spec.master_seed, static_cast<std::uint64_t>(trial));
      const ChannelSet ch = draw_channels(cfg, cfg.geometry, seed);
      for (const std::string& mode : modes) {
        ResultRow row;
        row.sweep_param = pname;
        row.value = value;
        row.mode = mode;
        row.seed = seed;
        OptimizerOptions opts = base_opts;
        opts.mode = parse_mode(mode);
        try {
          const Allocation a = optimize(cfg, ch, opts, seed);
          row.objective_bits = a.objective / kLn2;
          row.iterations = static_cast<int>(a.trace.objective.size()) - 1;
          row.wall_ms = a.trace.wall_ms;
        } catch (const InfeasibleStartError&) {
          row.status = "infeasible_start";
          row.objective_bits = std::nan("");
        } catch (const NonmonotoneError&) {
          row.status = "nonmonotone";
          row.objective_bits = std::nan("");
        } catch (const std::exception&) {
          row.status = "error";
          row.objective_bits = std::nan("");
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "sweep_param,value,mode,seed,objective_bits,iterations,wall_ms,status\n";
  for (const auto& r : rows)
    os << r.sweep_param << ',' << fmt17(r.value) << ',' << r.mode << ',' << r.seed << ','
       << fmt17(r.objective_bits) << ',' << r.iterations << ',' << fmt17(r.wall_ms) << ','
       << r.status << '\n';
}

void write_json(std::ostream& os, const std::vector<ResultRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows)
    out.push_back({{"sweep_param", r.sweep_param},
                   {"value", r.value},
                   {"mode", r.mode},
                   {"seed", r.seed},
                   {"objective_bits", r.objective_bits},
                   {"iterations", r.iterations},
                   {"wall_ms", r.wall_ms},
                   {"status", r.status}});
  os << out.dump(2) << '\n';
}

ComplexityReport benchmark_complexity(const NetworkConfig& base,
                                      const std::vector<int>& n_ris_values,
                                      std::uint64_t seed) {
  ComplexityReport rep;
  for (const int nr : n_ris_values) {
    NetworkConfig cfg = base;
    cfg.N_ris = nr;
    if (cfg.M == 0) cfg.M = 1;
    if (const auto err = validate_config(cfg))
      throw DomainError("complexity sweep configuration invalid: " + err->reason);
    const ChannelSet ch = draw_channels(cfg, cfg.geometry, seed);

    OptimizerOptions opts;
    opts.enforce_qos = false;
    const Allocation a = initialize(cfg, ch, opts, seed);
    const SubproblemContext ctx = make_context(cfg, ch, opts);

    ComplexityPoint pt;
    pt.n_ris = nr;
    {
      const auto t0 = std::chrono::steady_clock::now();
      (void)solve_maxmin_rate_W(ctx, a.ris, a.precoders, a.split, opts.solver);
      pt.w_update_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
              .count();
    }
    {
      const auto t0 = std::chrono::steady_clock::now();
      (void)solve_ris_unitdisc(ctx, opts.objective, a.precoders, a.ris, a.split,
                               opts.solver);
      pt.ris_update_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
              .count();
    }
    rep.points.push_back(pt);
  }

  auto slope = [&](auto get) {
    const std::size_t n = rep.points.size();
    if (n < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : rep.points) {
      const double x = std::log(static_cast<double>(p.n_ris));
      const double y = std::log(std::max(1e-9, get(p)));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  rep.w_slope = slope([](const ComplexityPoint& p) { return p.w_update_ms; });
  rep.ris_slope = slope([](const ComplexityPoint& p) { return p.ris_update_ms; });
  return rep;
}

} // namespace rsma
