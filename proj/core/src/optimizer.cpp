#include "rsma/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <random>

namespace rsma {

namespace {

constexpr std::uint64_t kInitTag = 0x696e6974;     // precoder/phase init stream
constexpr std::uint64_t kPerturbTag = 0x70657274;  // degenerate-expansion rescue

MatC random_block(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> nd(0.0, 1.0);
  MatC m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = cplx(nd(rng), nd(rng));
  return m;
}

void rescale_to_power(PrecoderSet& W, double P) {
  for (int l = 0; l < W.cells(); ++l) {
    const double p = transmit_power(W, l);
    if (p > 0.0) {
      const double s = std::sqrt(P / p);
      W.common[l] *= s;
      for (auto& w : W.priv[l]) w *= s;
    }
  }
}

void cap_power(PrecoderSet& W, double P) {
  for (int l = 0; l < W.cells(); ++l) {
    const double p = transmit_power(W, l);
    if (p > P) {
      const double s = std::sqrt(P / p);
      W.common[l] *= s;
      for (auto& w : W.priv[l]) w *= s;
    }
  }
}

PrecoderSet perturb(const PrecoderSet& W0, const NetworkConfig& cfg, bool common_enabled,
                    std::uint64_t salt) {
  std::mt19937_64 rng(mix_seed(salt, kPerturbTag));
  PrecoderSet W = W0;
  const double s = 1e-6 * std::sqrt(cfg.P);
  for (int l = 0; l < W.cells(); ++l) {
    if (common_enabled)
      W.common[l] += s * random_block(rng, static_cast<int>(W.common[l].rows()),
                                      static_cast<int>(W.common[l].cols()));
    for (auto& w : W.priv[l])
      w += s * random_block(rng, static_cast<int>(w.rows()), static_cast<int>(w.cols()));
  }
  cap_power(W, cfg.P);
  return W;
}

double min_raw_rate(const SubproblemContext& ctx, const PrecoderSet& W,
                    const RISPhases& ris, const CommonRateSplit& t) {
  const TrueRates tr = true_rates(ctx, W, ris);
  double m = std::numeric_limits<double>::infinity();
  for (int l = 0; l < ctx.cfg->L; ++l)
    for (int k = 0; k < ctx.cfg->K; ++k)
      m = std::min(m, t.t[l][k] + tr.rp[l][k]);
  return m;
}

Allocation finalize_alloc(const SubproblemContext& ctx, const OptimizerOptions& opts,
                          const PrecoderSet& W, const RISPhases& ris,
                          const CommonRateSplit& split, ConvergenceTrace trace) {
  const NetworkConfig& cfg = *ctx.cfg;
  Allocation a;
  a.precoders = W;
  a.ris = ris;
  a.split = split;
  a.rates.assign(cfg.L, std::vector<double>(cfg.K, 0.0));
  a.ees.assign(cfg.L, std::vector<double>(cfg.K, 0.0));
  const TrueRates tr = true_rates(ctx, W, ris);
  for (int l = 0; l < cfg.L; ++l)
    for (int k = 0; k < cfg.K; ++k) {
      a.rates[l][k] = std::max(0.0, split.t[l][k] + tr.rp[l][k]);
      a.ees[l][k] = user_ee(a.rates[l][k] / kLn2, W, l, k, cfg, ctx.static_power());
    }
  a.objective = evaluate_objective(ctx, opts.objective, W, ris, split);
  a.trace = std::move(trace);
  return a;
}

RISUpdateResult update_ris(const SubproblemContext& ctx, const OptimizerOptions& opts,
                           const PrecoderSet& W, const RISPhases& ris,
                           const CommonRateSplit& t) {
  if (ris.feasibility_set == RisSet::UnitModulus)
    return solve_ris_unitmod(ctx, opts.objective, W, ris, t, opts.solver,
                             opts.ccp_delta0, opts.ccp_delta_min);
  return solve_ris_unitdisc(ctx, opts.objective, W, ris, t, opts.solver);
}

} // namespace

SubproblemContext make_context(const NetworkConfig& cfg, const ChannelSet& ch,
                               const OptimizerOptions& opts) {
  SubproblemContext ctx;
  ctx.cfg = &cfg;
  ctx.ch = &ch;
  ctx.include_common = opts.mode.common_enabled;
  ctx.fbl.n = cfg.n;
  if (!opts.mode.shannon_design) {
    ctx.fbl.qinv_c = inverse_q(cfg.eps_c);
    ctx.fbl.qinv_p = inverse_q(cfg.eps_p);
  }
  ctx.r_th_nats = opts.enforce_qos ? latency_threshold_nats(cfg.n, cfg.omega, cfg.tau) : 0.0;
  if (opts.mode.no_ris && opts.objective == ObjectiveKind::EnergyEfficiency) {
    ctx.pc_eff = cfg.p_c - cfg.ris_power / cfg.K;
    if (!(ctx.pc_eff > 0.0))
      throw DomainError("static power after the RIS offset is nonpositive");
  }
  return ctx;
}

Allocation initialize(const NetworkConfig& cfg, const ChannelSet& ch,
                      const OptimizerOptions& opts, std::uint64_t seed) {
  const ChannelSet chz = opts.mode.no_ris ? without_ris_legs(ch) : ch;
  const ChannelSet& chx = opts.mode.no_ris ? chz : ch;
  SubproblemContext ctx = make_context(cfg, chx, opts);
  // Repair passes ignore the QoS floor and drop the blocklength penalty: near
  // zero rate the penalty minorants are arbitrarily loose and the
  // majorize-maximize step cannot escape, while the penalty-free surrogates
  // lift the weak users reliably.
  SubproblemContext ctx_free = ctx;
  ctx_free.r_th_nats = 0.0;
  ctx_free.fbl.qinv_c = 0.0;
  ctx_free.fbl.qinv_p = 0.0;

  std::mt19937_64 rng(mix_seed(seed, kInitTag));
  const int d = opts.mode.single_stream ? 1 : cfg.N_bs;
  PrecoderSet W = PrecoderSet::zeros(cfg.L, cfg.K, cfg.N_bs,
                                     opts.mode.single_stream ? StreamMode::SingleStream
                                                             : StreamMode::Full);
  for (int l = 0; l < cfg.L; ++l) {
    if (opts.mode.common_enabled) W.common[l] = random_block(rng, cfg.N_bs, d);
    for (int k = 0; k < cfg.K; ++k) W.priv[l][k] = random_block(rng, cfg.N_bs, d);
  }
  rescale_to_power(W, cfg.P);

  RISPhases ris = RISPhases::zeros(cfg.M, cfg.N_ris, cfg.feasibility_set);
  std::uniform_real_distribution<double> ud(0.0, 2.0 * M_PI);
  for (int m = 0; m < cfg.M; ++m)
    for (int q = 0; q < cfg.N_ris; ++q) ris.upsilon[m][q] = std::polar(1.0, ud(rng));

  CommonRateSplit t = optimize_split(ctx, opts.objective, W, ris).split;

  {
    // Without a QoS floor the passes still run until every rate is positive,
    // so the main loop starts where the penalty surrogates are tight.
    const double target = ctx.r_th_nats > 0.0 ? ctx.r_th_nats : 1e-6;
    bool feasible = min_raw_rate(ctx, W, ris, t) >= target - 1e-9;
    for (int it = 0; it < opts.repair_iters && !feasible; ++it) {
      try {
        const WUpdateResult wr = solve_maxmin_rate_W(ctx_free, ris, W, t, opts.solver);
        W = wr.W;
        t = wr.split;
      } catch (const DegenerateExpansionError&) {
        W = perturb(W, cfg, opts.mode.common_enabled, seed + it);
        t = optimize_split(ctx_free, opts.objective, W, ris).split;
        continue;
      }
      if (cfg.M > 0 && !opts.mode.no_ris && !opts.mode.random_ris) {
        try {
          const RISUpdateResult rr = update_ris(ctx_free, opts, W, ris, t);
          ris = rr.ris;
          t = rr.split;
        } catch (const DegenerateExpansionError&) {
          // keep the current phases this pass
        }
      }
      // re-split against the true rates so the common budget stays consistent
      t = optimize_split(ctx, opts.objective, W, ris).split;
      feasible = min_raw_rate(ctx, W, ris, t) >= target - 1e-9;
    }
    if (!feasible && ctx.r_th_nats > 0.0)
      throw InfeasibleStartError("latency floor unreachable after feasibility repair");
  }

  ConvergenceTrace trace;
  trace.objective.push_back(evaluate_objective(ctx, opts.objective, W, ris, t));
  trace.stop_reason = "initialized";
  return finalize_alloc(ctx, opts, W, ris, t, std::move(trace));
}

Allocation optimize_from(const NetworkConfig& cfg, const ChannelSet& ch,
                         const OptimizerOptions& opts, const Allocation& start) {
  const auto t_start = std::chrono::steady_clock::now();
  const ChannelSet chz = opts.mode.no_ris ? without_ris_legs(ch) : ch;
  const ChannelSet& chx = opts.mode.no_ris ? chz : ch;
  const SubproblemContext ctx = make_context(cfg, chx, opts);

  PrecoderSet W = start.precoders;
  RISPhases ris = start.ris;
  CommonRateSplit t = start.split;
  double cur = evaluate_objective(ctx, opts.objective, W, ris, t);

  ConvergenceTrace trace;
  trace.objective.push_back(cur);
  std::string stop_reason = "iteration-limit";

  for (int it = 0; it < opts.max_outer; ++it) {
    const double prev = cur;

    // precoder update (one majorize-maximize step; fractional loop for EE)
    WUpdateResult wr;
    for (int attempt = 0;; ++attempt) {
      try {
        wr = (opts.objective == ObjectiveKind::EnergyEfficiency)
                 ? solve_maxmin_ee_W(ctx, ris, W, t, opts.solver, opts.max_gda, opts.gamma2)
                 : solve_maxmin_rate_W(ctx, ris, W, t, opts.solver);
        break;
      } catch (const DegenerateExpansionError&) {
        if (attempt >= 1) throw;
        W = perturb(W, cfg, opts.mode.common_enabled, chx.seed + it);
        t = optimize_split(ctx, opts.objective, W, ris).split;
        cur = evaluate_objective(ctx, opts.objective, W, ris, t);
      }
    }
    trace.subproblem_newton_iters += wr.newton_iters;
    if (!wr.mu_trace.empty()) trace.gda_mu.push_back(wr.mu_trace);
    {
      const double cand = evaluate_objective(ctx, opts.objective, wr.W, ris, wr.split);
      if (cand >= cur - 1e-12) {
        W = wr.W;
        t = wr.split;
        cur = std::max(cur, cand);
      }
    }
    trace.after_w_update.push_back(cur);

    // phase update
    if (cfg.M > 0 && !opts.mode.no_ris && !opts.mode.random_ris) {
      RISUpdateResult rr;
      try {
        rr = update_ris(ctx, opts, W, ris, t);
        trace.subproblem_newton_iters += rr.newton_iters;
        const double cand = evaluate_objective(ctx, opts.objective, W, rr.ris, rr.split);
        if (cand >= cur - 1e-12) {
          ris = rr.ris;
          t = rr.split;
          cur = std::max(cur, cand);
        }
      } catch (const DegenerateExpansionError&) {
        // keep the current phases this round
      }
    }
    trace.after_ris_update.push_back(cur);
    trace.objective.push_back(cur);

    if (cur - prev < opts.gamma1 * std::max(1e-12, std::abs(prev))) {
      stop_reason = "converged";
      break;
    }
  }

  trace.stop_reason = stop_reason;
  trace.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t_start)
                      .count();
  return finalize_alloc(ctx, opts, W, ris, t, std::move(trace));
}

Allocation optimize(const NetworkConfig& cfg, const ChannelSet& ch,
                    const OptimizerOptions& opts, std::uint64_t seed) {
  const Allocation init = initialize(cfg, ch, opts, seed);
  Allocation out = optimize_from(cfg, ch, opts, init);
  if (opts.mode.common_enabled) {
    // The common stream subsumes the no-common design (zero common precoder,
    // zero splits), but a random start can land the alternating optimization
    // in a worse basin. Run the no-common problem as a second restart, try to
    // grow a lightly loaded common stream from its solution, and keep the
    // best of the three candidates.
    OptimizerOptions base_opts = opts;
    base_opts.mode.common_enabled = false;
    const Allocation base_init = initialize(cfg, ch, base_opts, seed);
    const Allocation base = optimize_from(cfg, ch, base_opts, base_init);

    Allocation warm = base;
    std::mt19937_64 rng(mix_seed(seed ^ 0x636f6d6dull, kInitTag));
    const int d = opts.mode.single_stream ? 1 : cfg.N_bs;
    for (int l = 0; l < cfg.L; ++l) {
      MatC c = random_block(rng, cfg.N_bs, d);
      warm.precoders.common[l] = std::sqrt(1e-3 * cfg.P) / c.norm() * c;
    }
    cap_power(warm.precoders, cfg.P);
    {
      const ChannelSet chz = opts.mode.no_ris ? without_ris_legs(ch) : ch;
      const ChannelSet& chx = opts.mode.no_ris ? chz : ch;
      const SubproblemContext ctx = make_context(cfg, chx, opts);
      warm.split = optimize_split(ctx, opts.objective, warm.precoders, warm.ris).split;
    }
    try {
      const Allocation grown = optimize_from(cfg, ch, opts, warm);
      if (grown.objective > out.objective) out = grown;
    } catch (const DegenerateExpansionError&) {
      // the seeded common stream collapsed; fall through to the comparison
    }
    if (base.objective > out.objective) out = base;

    // Common-dominant restart: when the optimum sends (nearly) everything on
    // the common stream, the private-rate surrogates are loose near zero
    // private power and the other starts stay away from that corner.
    {
      Allocation heavy = init;
      for (int l = 0; l < cfg.L; ++l) {
        const double pcn = heavy.precoders.common[l].norm();
        if (pcn > 0.0)
          heavy.precoders.common[l] *= std::sqrt(0.999 * cfg.P) / pcn;
        double pp = 0.0;
        for (const auto& w : heavy.precoders.priv[l]) pp += w.squaredNorm();
        if (pp > 0.0) {
          const double s = std::sqrt(0.001 * cfg.P / pp);
          for (auto& w : heavy.precoders.priv[l]) w *= s;
        }
      }
      const ChannelSet chz = opts.mode.no_ris ? without_ris_legs(ch) : ch;
      const ChannelSet& chx = opts.mode.no_ris ? chz : ch;
      const SubproblemContext ctx = make_context(cfg, chx, opts);
      heavy.split = optimize_split(ctx, opts.objective, heavy.precoders, heavy.ris).split;
      try {
        const Allocation dom = optimize_from(cfg, ch, opts, heavy);
        if (dom.objective > out.objective) out = dom;
      } catch (const DegenerateExpansionError&) {
        // unusable corner start; keep the best candidate so far
      }
    }
  }
  return out;
}

AuditReport evaluate_allocation(const NetworkConfig& cfg, const ChannelSet& ch,
                                const OptimizerOptions& opts, const Allocation& alloc) {
  const double tol = 1e-6;
  const ChannelSet chz = opts.mode.no_ris ? without_ris_legs(ch) : ch;
  const ChannelSet& chx = opts.mode.no_ris ? chz : ch;
  const SubproblemContext ctx = make_context(cfg, chx, opts);

  AuditReport rep;
  auto fail = [&](const std::string& s) {
    rep.ok = false;
    rep.violations.push_back(s);
  };

  for (int l = 0; l < cfg.L; ++l) {
    const double p = transmit_power(alloc.precoders, l);
    if (p > cfg.P + tol)
      fail("transmit power exceeds the budget in cell " + std::to_string(l));
  }
  if (!opts.mode.no_ris && cfg.M > 0 && !alloc.ris.feasible(tol))
    fail("RIS phases leave the feasibility set");
  if (!opts.mode.common_enabled) {
    for (int l = 0; l < cfg.L; ++l) {
      if (alloc.precoders.common[l].norm() > tol)
        fail("common precoder active without rate splitting in cell " + std::to_string(l));
      for (int k = 0; k < cfg.K; ++k)
        if (alloc.split.t[l][k] > tol)
          fail("nonzero common split without rate splitting");
    }
  }

  const TrueRates tr = true_rates(ctx, alloc.precoders, alloc.ris);
  for (int l = 0; l < cfg.L; ++l) {
    double tsum = 0.0;
    double rc_min = std::numeric_limits<double>::infinity();
    for (int k = 0; k < cfg.K; ++k) {
      if (alloc.split.t[l][k] < -1e-12) fail("negative common split");
      tsum += alloc.split.t[l][k];
      rc_min = std::min(rc_min, tr.rc[l][k]);
      const double rate = std::max(0.0, alloc.split.t[l][k] + tr.rp[l][k]);
      if (std::abs(rate - alloc.rates[l][k]) > tol)
        fail("reported rate mismatch for user (" + std::to_string(l) + "," +
             std::to_string(k) + ")");
      if (ctx.r_th_nats > 0.0 &&
          alloc.split.t[l][k] + tr.rp[l][k] < ctx.r_th_nats - tol)
        fail("latency floor violated for user (" + std::to_string(l) + "," +
             std::to_string(k) + ")");
    }
    if (opts.mode.common_enabled && tsum > std::max(0.0, rc_min) + tol)
      fail("common splits exceed the decodable common rate in cell " + std::to_string(l));
  }

  const double obj =
      evaluate_objective(ctx, opts.objective, alloc.precoders, alloc.ris, alloc.split);
  if (std::abs(obj - alloc.objective) > tol * std::max(1.0, std::abs(obj)))
    fail("objective does not match a from-scratch evaluation");
  return rep;
}

} // namespace rsma
