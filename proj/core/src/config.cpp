#include "rsma/config.hpp"

#include <cmath>

namespace rsma {

GeometryModel default_geometry(int L, int M) {
  GeometryModel g;
  g.bs_pos.resize(L);
  for (int l = 0; l < L; ++l) {
    double x = (L == 1) ? 0.0 : (l == 0 ? -100.0 : -100.0 + 200.0 * l / (L - 1));
    g.bs_pos[l] = {x, 0.0};
  }
  g.ris_pos.resize(M);
  for (int m = 0; m < M; ++m) {
    // one RIS per cell when M == L; extras cycle over cells
    const auto& bs = g.bs_pos[m % L];
    g.ris_pos[m] = {bs[0] + 14.142, bs[1] + 14.142};  // 20 m from the BS
  }
  g.drop_center.resize(L);
  for (int l = 0; l < L; ++l) {
    if (M > 0) {
      g.drop_center[l] = g.ris_pos[l % M];
    } else {
      g.drop_center[l] = {g.bs_pos[l][0] + 14.142, g.bs_pos[l][1] + 14.142};
    }
  }
  return g;
}

NetworkConfig NetworkConfig::scenario1() {
  NetworkConfig c;
  c.L = 2; c.K = 3; c.M = 2;
  c.N_bs = 2; c.N_u = 2; c.N_ris = 20;
  c.P = 10.0;  // 10 dB
  c.n = 256.0;
  c.eps_c = 5e-6; c.eps_p = 5e-6;
  c.geometry = default_geometry(c.L, c.M);
  return c;
}

NetworkConfig NetworkConfig::scenario2() {
  NetworkConfig c = scenario1();
  c.L = 1; c.M = 1;
  c.geometry = default_geometry(c.L, c.M);
  return c;
}

std::optional<ValidationError> validate_config(const NetworkConfig& cfg) {
  auto fail = [](const char* f, const char* r) {
    return ValidationError{f, r};
  };
  if (cfg.L < 1) return fail("L", "cell count must be >= 1");
  if (cfg.K < 1) return fail("K", "users per cell must be >= 1");
  if (cfg.M < 0) return fail("M", "RIS count must be >= 0");
  if (cfg.N_bs < 1) return fail("N_bs", "transmit antennas must be >= 1");
  if (cfg.N_u < 1) return fail("N_u", "receive antennas must be >= 1");
  if (cfg.M > 0 && cfg.N_ris < 1) return fail("N_ris", "RIS elements must be >= 1");
  if (!(cfg.P > 0.0)) return fail("P", "power budget must be positive");
  if (!(cfg.sigma2 > 0.0)) return fail("sigma2", "noise variance must be positive");
  if (!(cfg.n >= 1.0)) return fail("n", "block length must be >= 1");
  if (!(cfg.eps_c > 0.0 && cfg.eps_c < 0.5)) return fail("eps_c", "must lie in (0, 0.5)");
  if (!(cfg.eps_p > 0.0 && cfg.eps_p < 0.5)) return fail("eps_p", "must lie in (0, 0.5)");
  if (!(cfg.omega > 0.0)) return fail("omega", "bandwidth must be positive");
  if (!(cfg.tau > 0.0)) return fail("tau", "latency target must be positive");
  if (!cfg.alpha.empty()) {
    if (static_cast<int>(cfg.alpha.size()) != cfg.L)
      return fail("alpha", "needs one row per cell");
    for (const auto& row : cfg.alpha) {
      if (static_cast<int>(row.size()) != cfg.K)
        return fail("alpha", "needs one weight per user");
      for (double a : row)
        if (!(a > 0.0)) return fail("alpha", "weights must be positive");
    }
  }
  if (!cfg.lambda.empty()) {
    if (static_cast<int>(cfg.lambda.size()) != cfg.L)
      return fail("lambda", "needs one row per cell");
    for (const auto& row : cfg.lambda) {
      if (static_cast<int>(row.size()) != cfg.K)
        return fail("lambda", "needs one weight per user");
      for (double a : row)
        if (!(a > 0.0)) return fail("lambda", "weights must be positive");
    }
  }
  if (!(cfg.p_c > 0.0)) return fail("p_c", "static power must be positive");
  if (!(cfg.eta >= 1.0)) return fail("eta", "inverse PA efficiency must be >= 1");
  if (cfg.ris_power < 0.0) return fail("ris_power", "must be nonnegative");
  const auto& g = cfg.geometry;
  if (static_cast<int>(g.bs_pos.size()) < cfg.L)
    return fail("geometry.bs_pos", "needs one position per BS");
  if (static_cast<int>(g.ris_pos.size()) < cfg.M)
    return fail("geometry.ris_pos", "needs one position per RIS");
  if (static_cast<int>(g.drop_center.size()) < cfg.L)
    return fail("geometry.drop_center", "needs one drop region per cell");
  if (!(g.pl_exp_direct > 0.0)) return fail("geometry.pl_exp_direct", "must be positive");
  if (!(g.pl_exp_ris > 0.0)) return fail("geometry.pl_exp_ris", "must be positive");
  if (g.rician_k < 0.0) return fail("geometry.rician_k", "must be nonnegative");
  if (!(g.drop_radius > 0.0)) return fail("geometry.drop_radius", "must be positive");
  return std::nullopt;
}

} // namespace rsma
