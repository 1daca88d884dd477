#include "rsma/subproblems.hpp"

#include <algorithm>
#include <cmath>

namespace rsma {

namespace {

// Real coordinates: per precoder block [vec(Re W); vec(Im W)] column-major,
// then (optionally) the 2*MN RIS phase coordinates, the L*K common splits and
// one auxiliary scalar (the epigraph variable).
struct VarLayout {
  std::map<BlockKey, int> block_off;
  int rows = 0, cols = 0;
  int z_off = -1, MN = 0;
  int t_off = -1;
  int aux_off = 0;
  int dim = 0;
  int L = 0, K = 0;

  bool has_t() const { return t_off >= 0; }
  int t_idx(int l, int k) const { return t_off + l * K + k; }
  int bsize() const { return 2 * rows * cols; }
};

VarLayout layout_for_W(const NetworkConfig& cfg, int d, bool include_common) {
  VarLayout lay;
  lay.rows = cfg.N_bs;
  lay.cols = d;
  lay.L = cfg.L;
  lay.K = cfg.K;
  int at = 0;
  for (int i = 0; i < cfg.L; ++i) {
    if (include_common) {
      lay.block_off[{i, -1}] = at;
      at += lay.bsize();
    }
    for (int j = 0; j < cfg.K; ++j) {
      lay.block_off[{i, j}] = at;
      at += lay.bsize();
    }
  }
  if (include_common) {
    lay.t_off = at;
    at += cfg.L * cfg.K;
  }
  lay.aux_off = at++;
  lay.dim = at;
  return lay;
}

VarLayout layout_for_RIS(const NetworkConfig& cfg, int MN, bool include_common) {
  VarLayout lay;
  lay.L = cfg.L;
  lay.K = cfg.K;
  lay.z_off = 0;
  lay.MN = MN;
  int at = 2 * MN;
  if (include_common) {
    lay.t_off = at;
    at += cfg.L * cfg.K;
  }
  lay.aux_off = at++;
  lay.dim = at;
  return lay;
}

void pack_block(VecR& x, const VarLayout& lay, const BlockKey& b, const MatC& W) {
  const auto it = lay.block_off.find(b);
  if (it == lay.block_off.end()) return;
  const int off = it->second, rc = lay.rows * lay.cols;
  for (int c = 0; c < lay.cols; ++c)
    for (int r = 0; r < lay.rows; ++r) {
      x[off + c * lay.rows + r] = W(r, c).real();
      x[off + rc + c * lay.rows + r] = W(r, c).imag();
    }
}

MatC unpack_block(const VecR& x, const VarLayout& lay, const BlockKey& b) {
  const int off = lay.block_off.at(b), rc = lay.rows * lay.cols;
  MatC W(lay.rows, lay.cols);
  for (int c = 0; c < lay.cols; ++c)
    for (int r = 0; r < lay.rows; ++r)
      W(r, c) = cplx(x[off + c * lay.rows + r], x[off + rc + c * lay.rows + r]);
  return W;
}

void add_lin_block(VecR& q, const VarLayout& lay, const BlockKey& b, const MatC& C,
                   double s) {
  const auto it = lay.block_off.find(b);
  if (it == lay.block_off.end()) return;
  const int off = it->second, rc = lay.rows * lay.cols;
  for (int c = 0; c < lay.cols; ++c)
    for (int r = 0; r < lay.rows; ++r) {
      q[off + c * lay.rows + r] += 2.0 * s * C(r, c).real();
      q[off + rc + c * lay.rows + r] += 2.0 * s * C(r, c).imag();
    }
}

// adds s * w^H Q w to the quadratic form 0.5 x' P x for every column w
void add_quad_block(MatR& P, const VarLayout& lay, const BlockKey& b, const MatC& Q,
                    double s) {
  const auto it = lay.block_off.find(b);
  if (it == lay.block_off.end()) return;
  const int off = it->second, rc = lay.rows * lay.cols, n = lay.rows;
  const MatR Re = 2.0 * s * Q.real();
  const MatR Im = 2.0 * s * Q.imag();
  for (int c = 0; c < lay.cols; ++c) {
    const int re = off + c * n, im = off + rc + c * n;
    P.block(re, re, n, n) += Re;
    P.block(im, im, n, n) += Re;
    P.block(re, im, n, n) -= Im;
    P.block(im, re, n, n) += Im;
  }
}

void add_surrogate_w(QuadConstraint& qc, const VarLayout& lay, const SurrogateW& s,
                     double scale) {
  qc.c0 += scale * s.a;
  for (const auto& [b, C] : s.lin) add_lin_block(qc.q, lay, b, C, scale);
  for (const auto& [b, Q] : s.quad) add_quad_block(qc.P, lay, b, Q, scale);
}

void add_ris_quadratic(QuadConstraint& qc, const VarLayout& lay, const RISQuadratic& rq,
                       double s) {
  qc.c0 += s * rq.c0;
  const int z = lay.z_off, MN = lay.MN;
  for (int q = 0; q < MN; ++q) {
    qc.q[z + q] += 2.0 * s * rq.c[q].real();
    qc.q[z + MN + q] -= 2.0 * s * rq.c[q].imag();
  }
  const MatR Re = 2.0 * s * rq.Q.real();
  const MatR Im = 2.0 * s * rq.Q.imag();
  qc.P.block(z, z, MN, MN) += Re;
  qc.P.block(z + MN, z + MN, MN, MN) += Re;
  qc.P.block(z, z + MN, MN, MN) -= Im;
  qc.P.block(z + MN, z, MN, MN) += Im;
}

QuadConstraint fresh(const VarLayout& lay, bool quadratic) {
  QuadConstraint qc;
  qc.q = VecR::Zero(lay.dim);
  if (quadratic) qc.P = MatR::Zero(lay.dim, lay.dim);
  return qc;
}

// The surrogate program can be infeasible at the warm start even though the
// true allocation is fine (e.g. a negative common-rate minorant forces
// sum_j t_lj <= g_c < 0 while t = 0). Shifting only the violated constraints
// keeps the warm start admissible; the returned split is always re-derived
// from the true rates, so no relaxed constraint leaks into the allocation.
void relax_for_warm_start(ConvexProgram& prog, const VecR& x0) {
  for (auto& c : prog.cons) {
    const double v = c.value(x0);
    if (v < 0.0) c.c0 -= v;
  }
}

double weight_of(const SubproblemContext& ctx, ObjectiveKind obj, const PrecoderSet& W,
                 int l, int k) {
  if (obj == ObjectiveKind::SpectralEfficiency) return ctx.cfg->weight_alpha(l, k);
  return ctx.cfg->weight_lambda(l, k) / user_power(ctx, W, l, k);
}

// shared epigraph constraints for both precoder subproblems; `floors` supplies
// the per-user epigraph constraint body g(x) with q[aux] -= 1 applied here
void add_shared_w_constraints(ConvexProgram& prog, const SubproblemContext& ctx,
                              const VarLayout& lay,
                              const std::vector<std::vector<SurrogateW>>& sp,
                              const std::vector<std::vector<SurrogateW>>& sc) {
  const NetworkConfig& cfg = *ctx.cfg;
  for (int l = 0; l < cfg.L; ++l)
    for (int k = 0; k < cfg.K; ++k) {
      if (ctx.r_th_nats > 0.0) {
        QuadConstraint qos = fresh(lay, true);
        add_surrogate_w(qos, lay, sp[l][k], 1.0);
        if (lay.has_t()) qos.q[lay.t_idx(l, k)] += 1.0;
        qos.c0 -= ctx.r_th_nats;
        prog.cons.push_back(std::move(qos));
      }
      if (ctx.include_common) {
        QuadConstraint cm = fresh(lay, true);
        add_surrogate_w(cm, lay, sc[l][k], 1.0);
        for (int j = 0; j < cfg.K; ++j) cm.q[lay.t_idx(l, j)] -= 1.0;
        prog.cons.push_back(std::move(cm));
        QuadConstraint tn = fresh(lay, false);
        tn.q[lay.t_idx(l, k)] = 1.0;
        prog.cons.push_back(std::move(tn));
      }
    }
  for (int i = 0; i < cfg.L; ++i) {
    QuadConstraint pw = fresh(lay, true);
    pw.c0 = cfg.P;
    const MatC I = MatC::Identity(lay.rows, lay.rows);
    if (ctx.include_common) add_quad_block(pw.P, lay, {i, -1}, I, 1.0);
    for (int j = 0; j < cfg.K; ++j) add_quad_block(pw.P, lay, {i, j}, I, 1.0);
    prog.cons.push_back(std::move(pw));
  }
}

VecR pack_state(const VarLayout& lay, const PrecoderSet& W, const CommonRateSplit& t,
                double aux) {
  VecR x = VecR::Zero(lay.dim);
  for (const auto& [b, off] : lay.block_off)
    pack_block(x, lay, b, b.second < 0 ? W.common[b.first] : W.priv[b.first][b.second]);
  if (lay.has_t())
    for (int l = 0; l < lay.L; ++l)
      for (int k = 0; k < lay.K; ++k) x[lay.t_idx(l, k)] = t.t[l][k];
  x[lay.aux_off] = aux;
  return x;
}

PrecoderSet unpack_precoders(const VecR& x, const VarLayout& lay, const PrecoderSet& like) {
  PrecoderSet W = like;
  for (const auto& [b, off] : lay.block_off) {
    (void)off;
    if (b.second < 0)
      W.common[b.first] = unpack_block(x, lay, b);
    else
      W.priv[b.first][b.second] = unpack_block(x, lay, b);
  }
  return W;
}

CommonRateSplit unpack_split(const VecR& x, const VarLayout& lay,
                             const CommonRateSplit& fallback) {
  if (!lay.has_t()) return fallback;
  CommonRateSplit t = CommonRateSplit::zeros(lay.L, lay.K);
  for (int l = 0; l < lay.L; ++l)
    for (int k = 0; k < lay.K; ++k) t.t[l][k] = std::max(0.0, x[lay.t_idx(l, k)]);
  return t;
}

} // namespace

TrueRates true_rates(const SubproblemContext& ctx, const PrecoderSet& W,
                     const RISPhases& ris) {
  const NetworkConfig& cfg = *ctx.cfg;
  const EffectiveChannels eff = compute_effective_channels(*ctx.ch, ris);
  TrueRates tr;
  tr.rc.assign(cfg.L, std::vector<double>(cfg.K, 0.0));
  tr.rp.assign(cfg.L, std::vector<double>(cfg.K, 0.0));
  for (int l = 0; l < cfg.L; ++l)
    for (int k = 0; k < cfg.K; ++k) {
      const UserLinkStats st = link_stats(cfg, eff, W, l, k);
      tr.rc[l][k] = fbl_rate_qinv({st.Sc, st.Dc}, ctx.fbl.n, ctx.fbl.qinv_c).fbl;
      const double sh = shannon_rate({st.S, st.D});
      const double disp = achievable_dispersion({st.S, st.D});
      tr.rp[l][k] = sh - ctx.fbl.qinv_p * std::sqrt(disp / ctx.fbl.n);
    }
  return tr;
}

double user_power(const SubproblemContext& ctx, const PrecoderSet& W, int l, int k) {
  const NetworkConfig& cfg = *ctx.cfg;
  double p = ctx.static_power() + cfg.eta * W.priv[l][k].squaredNorm();
  if (ctx.include_common) p += cfg.eta / cfg.K * W.common[l].squaredNorm();
  if (!(p > 0.0)) throw DomainError("user power is nonpositive");
  return p;
}

double evaluate_objective(const SubproblemContext& ctx, ObjectiveKind obj,
                          const PrecoderSet& W, const RISPhases& ris,
                          const CommonRateSplit& t) {
  const TrueRates tr = true_rates(ctx, W, ris);
  double best = std::numeric_limits<double>::infinity();
  for (int l = 0; l < ctx.cfg->L; ++l)
    for (int k = 0; k < ctx.cfg->K; ++k) {
      const double rate = std::max(0.0, t.t[l][k] + tr.rp[l][k]);
      best = std::min(best, weight_of(ctx, obj, W, l, k) * rate);
    }
  return best;
}

SplitResult optimize_split(const SubproblemContext& ctx, ObjectiveKind obj,
                           const PrecoderSet& W, const RISPhases& ris) {
  const NetworkConfig& cfg = *ctx.cfg;
  SplitResult res;
  res.split = CommonRateSplit::zeros(cfg.L, cfg.K);
  const TrueRates tr = true_rates(ctx, W, ris);

  for (int l = 0; l < cfg.L; ++l) {
    std::vector<double> w(cfg.K), rp(cfg.K), floor(cfg.K, 0.0);
    for (int k = 0; k < cfg.K; ++k) {
      w[k] = weight_of(ctx, obj, W, l, k);
      rp[k] = tr.rp[l][k];
    }
    double budget = 0.0;
    if (ctx.include_common) {
      budget = *std::min_element(tr.rc[l].begin(), tr.rc[l].end());
      budget = std::max(0.0, budget);
    }
    if (ctx.r_th_nats > 0.0) {
      double need = 0.0;
      for (int k = 0; k < cfg.K; ++k) {
        floor[k] = std::max(0.0, ctx.r_th_nats - rp[k]);
        need += floor[k];
      }
      if (need > budget + 1e-12) {
        res.qos_feasible = false;
        std::fill(floor.begin(), floor.end(), 0.0);
      }
    }
    if (!ctx.include_common) continue;  // split stays zero

    auto required = [&](double v) {
      double s = 0.0;
      for (int k = 0; k < cfg.K; ++k)
        s += std::max(floor[k], v / w[k] - rp[k]);
      return s;
    };
    double lo = std::numeric_limits<double>::infinity();
    for (int k = 0; k < cfg.K; ++k) lo = std::min(lo, w[k] * (floor[k] + rp[k]));
    lo = std::max(0.0, lo);
    double hi = lo + 1.0;
    while (required(hi) <= budget && hi < 1e9) hi = 2.0 * hi + 1.0;
    if (required(lo) > budget) hi = lo;  // only the floors fit
    for (int it = 0; it < 80 && hi - lo > 1e-13 * (1.0 + hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (required(mid) <= budget ? lo : hi) = mid;
    }
    for (int k = 0; k < cfg.K; ++k)
      res.split.t[l][k] = std::max(0.0, std::max(floor[k], lo / w[k] - rp[k]));
    // keep the cell sum inside the common-rate budget against roundoff
    double sum = res.split.cell_sum(l);
    if (sum > budget && sum > 0.0) {
      const double scale = budget / sum;
      for (int k = 0; k < cfg.K; ++k) res.split.t[l][k] *= scale;
    }
  }
  res.objective = evaluate_objective(ctx, obj, W, ris, res.split);
  return res;
}

WUpdateResult solve_maxmin_rate_W(const SubproblemContext& ctx, const RISPhases& ris,
                                  const PrecoderSet& W0, const CommonRateSplit& t0,
                                  const SolverOptions& opts) {
  const NetworkConfig& cfg = *ctx.cfg;
  const ExpansionPoint ep = ExpansionPoint::make(cfg, *ctx.ch, ris, W0);
  const int d = static_cast<int>(W0.priv[0][0].cols());
  const VarLayout lay = layout_for_W(cfg, d, ctx.include_common);

  std::vector<std::vector<SurrogateW>> sp(cfg.L, std::vector<SurrogateW>(cfg.K));
  std::vector<std::vector<SurrogateW>> sc;
  if (ctx.include_common) sc.assign(cfg.L, std::vector<SurrogateW>(cfg.K));
  for (int l = 0; l < cfg.L; ++l)
    for (int k = 0; k < cfg.K; ++k) {
      sp[l][k] = build_private_surrogate_W(cfg, ep, l, k, ctx.fbl);
      if (ctx.include_common) sc[l][k] = build_common_surrogate_W(cfg, ep, l, k, ctx.fbl);
    }

  ConvexProgram prog;
  prog.obj = VecR::Zero(lay.dim);
  prog.obj[lay.aux_off] = 1.0;
  for (int l = 0; l < cfg.L; ++l)
    for (int k = 0; k < cfg.K; ++k) {
      QuadConstraint fl = fresh(lay, true);
      const double alpha = cfg.weight_alpha(l, k);
      add_surrogate_w(fl, lay, sp[l][k], alpha);
      if (lay.has_t()) fl.q[lay.t_idx(l, k)] += alpha;
      fl.q[lay.aux_off] -= 1.0;
      prog.cons.push_back(std::move(fl));
    }
  add_shared_w_constraints(prog, ctx, lay, sp, sc);

  double aux0 = std::numeric_limits<double>::infinity();
  for (int l = 0; l < cfg.L; ++l)
    for (int k = 0; k < cfg.K; ++k)
      aux0 = std::min(aux0, cfg.weight_alpha(l, k) * (t0.t[l][k] + sp[l][k].evaluate(W0)));
  const VecR x0 = pack_state(lay, W0, t0, aux0);
  relax_for_warm_start(prog, x0);

  const SolveResult sr = solve_concave_qcp(prog, x0, opts);
  if (sr.status == SolveStatus::Infeasible)
    throw InfeasibleError("precoder subproblem infeasible from a feasible warm start");

  WUpdateResult out;
  out.W = unpack_precoders(sr.x, lay, W0);
  out.newton_iters = sr.newton_iters;
  out.surrogate_objective = sr.objective;
  const SplitResult split = optimize_split(ctx, ObjectiveKind::SpectralEfficiency, out.W, ris);
  out.split = split.split;
  return out;
}

WUpdateResult solve_maxmin_ee_W(const SubproblemContext& ctx, const RISPhases& ris,
                                const PrecoderSet& W0, const CommonRateSplit& t0,
                                const SolverOptions& opts, int max_gda, double gamma2) {
  const NetworkConfig& cfg = *ctx.cfg;
  const ExpansionPoint ep = ExpansionPoint::make(cfg, *ctx.ch, ris, W0);
  const int d = static_cast<int>(W0.priv[0][0].cols());
  const VarLayout lay = layout_for_W(cfg, d, ctx.include_common);

  std::vector<std::vector<SurrogateW>> sp(cfg.L, std::vector<SurrogateW>(cfg.K));
  std::vector<std::vector<SurrogateW>> sc;
  if (ctx.include_common) sc.assign(cfg.L, std::vector<SurrogateW>(cfg.K));
  for (int l = 0; l < cfg.L; ++l)
    for (int k = 0; k < cfg.K; ++k) {
      sp[l][k] = build_private_surrogate_W(cfg, ep, l, k, ctx.fbl);
      if (ctx.include_common) sc[l][k] = build_common_surrogate_W(cfg, ep, l, k, ctx.fbl);
    }

  auto ratio = [&](const PrecoderSet& W, const CommonRateSplit& t) {
    double mu = std::numeric_limits<double>::infinity();
    for (int l = 0; l < cfg.L; ++l)
      for (int k = 0; k < cfg.K; ++k) {
        const double r = std::max(0.0, t.t[l][k] + sp[l][k].evaluate(W));
        mu = std::min(mu, cfg.weight_lambda(l, k) * r / user_power(ctx, W, l, k));
      }
    return std::max(0.0, mu);
  };

  WUpdateResult out;
  PrecoderSet W_cur = W0;
  CommonRateSplit t_cur = t0;
  double mu = ratio(W_cur, t_cur);
  out.mu_trace.push_back(mu);

  for (int j = 0; j < max_gda; ++j) {
    ConvexProgram prog;
    prog.obj = VecR::Zero(lay.dim);
    prog.obj[lay.aux_off] = 1.0;
    for (int l = 0; l < cfg.L; ++l)
      for (int k = 0; k < cfg.K; ++k) {
        QuadConstraint fl = fresh(lay, true);
        const double lam = cfg.weight_lambda(l, k);
        add_surrogate_w(fl, lay, sp[l][k], lam);
        if (lay.has_t()) fl.q[lay.t_idx(l, k)] += lam;
        fl.c0 -= mu * ctx.static_power();
        const MatC I = MatC::Identity(lay.rows, lay.rows);
        add_quad_block(fl.P, lay, {l, k}, I, mu * cfg.eta);
        if (ctx.include_common)
          add_quad_block(fl.P, lay, {l, -1}, I, mu * cfg.eta / cfg.K);
        fl.q[lay.aux_off] -= 1.0;
        prog.cons.push_back(std::move(fl));
      }
    add_shared_w_constraints(prog, ctx, lay, sp, sc);

    double aux0 = std::numeric_limits<double>::infinity();
    for (int l = 0; l < cfg.L; ++l)
      for (int k = 0; k < cfg.K; ++k) {
        const double num = cfg.weight_lambda(l, k) *
                           (t_cur.t[l][k] + sp[l][k].evaluate(W_cur));
        aux0 = std::min(aux0, num - mu * user_power(ctx, W_cur, l, k));
      }
    const VecR x0 = pack_state(lay, W_cur, t_cur, aux0);
    relax_for_warm_start(prog, x0);

    const SolveResult sr = solve_concave_qcp(prog, x0, opts);
    out.newton_iters += sr.newton_iters;
    if (sr.status == SolveStatus::Infeasible)
      throw InfeasibleError("fractional subproblem infeasible from a feasible warm start");

    W_cur = unpack_precoders(sr.x, lay, W0);
    t_cur = unpack_split(sr.x, lay, t_cur);
    const double mu_new = ratio(W_cur, t_cur);
    if (mu_new < mu - 1e-9 * std::max(1.0, std::abs(mu)))
      throw NonmonotoneError("fractional-programming ratio decreased");
    const bool done = (mu_new - mu) <= gamma2;
    mu = mu_new;
    out.mu_trace.push_back(mu);
    if (done) break;
  }

  out.W = W_cur;
  out.surrogate_objective = mu;
  const SplitResult split = optimize_split(ctx, ObjectiveKind::EnergyEfficiency, out.W, ris);
  out.split = split.split;
  return out;
}

namespace {

struct RisAssembly {
  VarLayout lay;
  std::vector<std::vector<RISQuadratic>> qp;  // private, [l][k]
  std::vector<std::vector<RISQuadratic>> qc;  // common
  std::vector<std::vector<double>> w;         // per-user metric weight
};

RisAssembly assemble_ris_surrogates(const SubproblemContext& ctx, ObjectiveKind obj,
                                    const PrecoderSet& W, const RISPhases& ris) {
  const NetworkConfig& cfg = *ctx.cfg;
  const ExpansionPoint ep = ExpansionPoint::make(cfg, *ctx.ch, ris, W);
  RisAssembly ra;
  const int MN = static_cast<int>(stack_phases(ris).size());
  ra.lay = layout_for_RIS(cfg, MN, ctx.include_common);
  ra.qp.assign(cfg.L, std::vector<RISQuadratic>(cfg.K));
  if (ctx.include_common) ra.qc.assign(cfg.L, std::vector<RISQuadratic>(cfg.K));
  ra.w.assign(cfg.L, std::vector<double>(cfg.K, 1.0));
  for (int l = 0; l < cfg.L; ++l)
    for (int k = 0; k < cfg.K; ++k) {
      ra.qp[l][k] =
          flatten_ris_surrogate(build_private_surrogate_RIS(cfg, ep, l, k, ctx.fbl), *ctx.ch);
      if (ctx.include_common)
        ra.qc[l][k] =
            flatten_ris_surrogate(build_common_surrogate_RIS(cfg, ep, l, k, ctx.fbl), *ctx.ch);
      ra.w[l][k] = weight_of(ctx, obj, W, l, k);
    }
  return ra;
}

ConvexProgram assemble_ris_program(const SubproblemContext& ctx, const RisAssembly& ra) {
  const NetworkConfig& cfg = *ctx.cfg;
  const VarLayout& lay = ra.lay;
  ConvexProgram prog;
  prog.obj = VecR::Zero(lay.dim);
  prog.obj[lay.aux_off] = 1.0;
  for (int l = 0; l < cfg.L; ++l)
    for (int k = 0; k < cfg.K; ++k) {
      QuadConstraint fl = fresh(lay, true);
      add_ris_quadratic(fl, lay, ra.qp[l][k], ra.w[l][k]);
      if (lay.has_t()) fl.q[lay.t_idx(l, k)] += ra.w[l][k];
      fl.q[lay.aux_off] -= 1.0;
      prog.cons.push_back(std::move(fl));
      if (ctx.r_th_nats > 0.0) {
        QuadConstraint qos = fresh(lay, true);
        add_ris_quadratic(qos, lay, ra.qp[l][k], 1.0);
        if (lay.has_t()) qos.q[lay.t_idx(l, k)] += 1.0;
        qos.c0 -= ctx.r_th_nats;
        prog.cons.push_back(std::move(qos));
      }
      if (ctx.include_common) {
        QuadConstraint cm = fresh(lay, true);
        add_ris_quadratic(cm, lay, ra.qc[l][k], 1.0);
        for (int j = 0; j < cfg.K; ++j) cm.q[lay.t_idx(l, j)] -= 1.0;
        prog.cons.push_back(std::move(cm));
        QuadConstraint tn = fresh(lay, false);
        tn.q[lay.t_idx(l, k)] = 1.0;
        prog.cons.push_back(std::move(tn));
      }
    }
  // |v_q|^2 <= 1 for every element
  for (int q = 0; q < lay.MN; ++q) {
    QuadConstraint el = fresh(lay, true);
    el.c0 = 1.0;
    el.P(lay.z_off + q, lay.z_off + q) = 2.0;
    el.P(lay.z_off + lay.MN + q, lay.z_off + lay.MN + q) = 2.0;
    prog.cons.push_back(std::move(el));
  }
  return prog;
}

VecR pack_ris_state(const VarLayout& lay, const VecC& v, const CommonRateSplit& t,
                    double aux) {
  VecR x = VecR::Zero(lay.dim);
  for (int q = 0; q < lay.MN; ++q) {
    x[lay.z_off + q] = v[q].real();
    x[lay.z_off + lay.MN + q] = v[q].imag();
  }
  if (lay.has_t())
    for (int l = 0; l < lay.L; ++l)
      for (int k = 0; k < lay.K; ++k) x[lay.t_idx(l, k)] = t.t[l][k];
  x[lay.aux_off] = aux;
  return x;
}

VecC unpack_ris_state(const VecR& x, const VarLayout& lay) {
  VecC v(lay.MN);
  for (int q = 0; q < lay.MN; ++q)
    v[q] = cplx(x[lay.z_off + q], x[lay.z_off + lay.MN + q]);
  return v;
}

double ris_warm_aux(const SubproblemContext& ctx, const RisAssembly& ra, const VecC& v,
                    const CommonRateSplit& t) {
  double aux = std::numeric_limits<double>::infinity();
  for (int l = 0; l < ctx.cfg->L; ++l)
    for (int k = 0; k < ctx.cfg->K; ++k)
      aux = std::min(aux, ra.w[l][k] * (t.t[l][k] + ra.qp[l][k].evaluate(v)));
  return aux;
}

} // namespace

RISUpdateResult solve_ris_unitdisc(const SubproblemContext& ctx, ObjectiveKind obj,
                                   const PrecoderSet& W, const RISPhases& ris0,
                                   const CommonRateSplit& t0, const SolverOptions& opts) {
  RISUpdateResult out;
  out.ris = ris0;
  if (ris0.ris_count() == 0 || stack_phases(ris0).size() == 0) {
    const SplitResult split = optimize_split(ctx, obj, W, ris0);
    out.split = split.split;
    out.surrogate_objective = split.objective;
    return out;
  }
  const RisAssembly ra = assemble_ris_surrogates(ctx, obj, W, ris0);
  ConvexProgram prog = assemble_ris_program(ctx, ra);
  const VecC v0 = stack_phases(ris0);
  const VecR x0 = pack_ris_state(ra.lay, v0, t0, ris_warm_aux(ctx, ra, v0, t0));
  relax_for_warm_start(prog, x0);

  const SolveResult sr = solve_concave_qcp(prog, x0, opts);
  out.newton_iters = sr.newton_iters;
  if (sr.status == SolveStatus::Infeasible)
    throw InfeasibleError("phase subproblem infeasible from a feasible warm start");

  const int N_ris = static_cast<int>(ris0.upsilon[0].size());
  out.ris = unstack_phases(unpack_ris_state(sr.x, ra.lay), ris0.ris_count(), N_ris,
                           ris0.feasibility_set);
  out.surrogate_objective = sr.objective;
  const SplitResult split = optimize_split(ctx, obj, W, out.ris);
  out.split = split.split;
  return out;
}

RISUpdateResult solve_ris_unitmod(const SubproblemContext& ctx, ObjectiveKind obj,
                                  const PrecoderSet& W, const RISPhases& ris0,
                                  const CommonRateSplit& t0, const SolverOptions& opts,
                                  double delta0, double delta_min) {
  RISUpdateResult out;
  out.ris = ris0;
  if (ris0.ris_count() == 0 || stack_phases(ris0).size() == 0) {
    const SplitResult split = optimize_split(ctx, obj, W, ris0);
    out.split = split.split;
    out.surrogate_objective = split.objective;
    return out;
  }

  RISPhases ris_cur = ris0;
  CommonRateSplit t_cur = t0;
  double best_obj = evaluate_objective(ctx, obj, W, ris0, t0);
  out.accepted = false;

  const int N_ris = static_cast<int>(ris0.upsilon[0].size());
  for (double delta = delta0; delta >= delta_min * 0.999; delta *= 0.5) {
    const RisAssembly ra = assemble_ris_surrogates(ctx, obj, W, ris_cur);
    ConvexProgram prog = assemble_ris_program(ctx, ra);
    const VecC vbar = stack_phases(ris_cur);
    // linearized modulus floor 2 Re(vbar_q^* v_q) - |vbar_q|^2 >= 1 - delta
    for (int q = 0; q < ra.lay.MN; ++q) {
      QuadConstraint lf = fresh(ra.lay, false);
      lf.c0 = -std::norm(vbar[q]) - 1.0 + delta;
      lf.q[ra.lay.z_off + q] = 2.0 * vbar[q].real();
      lf.q[ra.lay.z_off + ra.lay.MN + q] = 2.0 * vbar[q].imag();
      prog.cons.push_back(std::move(lf));
    }
    const VecR x0 = pack_ris_state(ra.lay, vbar, t_cur, ris_warm_aux(ctx, ra, vbar, t_cur));
    relax_for_warm_start(prog, x0);
    const SolveResult sr = solve_concave_qcp(prog, x0, opts);
    out.newton_iters += sr.newton_iters;
    if (sr.status == SolveStatus::Infeasible) continue;

    VecC v = unpack_ris_state(sr.x, ra.lay);
    for (Eigen::Index q = 0; q < v.size(); ++q) {
      const double a = std::abs(v[q]);
      v[q] = a > 1e-9 ? v[q] / a : vbar[q];
    }
    const RISPhases cand =
        unstack_phases(v, ris0.ris_count(), N_ris, ris0.feasibility_set);
    const SplitResult split = optimize_split(ctx, obj, W, cand);
    if (split.qos_feasible && split.objective >= best_obj - 1e-12) {
      best_obj = split.objective;
      ris_cur = cand;
      t_cur = split.split;
      out.accepted = true;
    }
  }

  out.ris = ris_cur;
  out.surrogate_objective = best_obj;
  const SplitResult split = optimize_split(ctx, obj, W, ris_cur);
  out.split = split.split;
  return out;
}

} // namespace rsma
