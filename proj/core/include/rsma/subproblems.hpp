#pragma once

#include "rsma/solver.hpp"
#include "rsma/surrogates.hpp"

namespace rsma {

enum class ObjectiveKind { SpectralEfficiency, EnergyEfficiency };

// Shared state for one alternating-optimization step. r_th_nats <= 0 disables
// the latency/QoS floor; pc_eff < 0 uses cfg->p_c (the no-RIS baseline lowers
// it by the saved per-user RIS static power share).
struct SubproblemContext {
  const NetworkConfig* cfg = nullptr;
  const ChannelSet* ch = nullptr;
  double r_th_nats = 0.0;
  bool include_common = true;
  FblParams fbl;
  double pc_eff = -1.0;

  double static_power() const { return pc_eff < 0.0 ? cfg->p_c : pc_eff; }
};

// Raw (unclamped) FBL rates in nats at a fixed operating point.
struct TrueRates {
  std::vector<std::vector<double>> rc;  // common-decoding rate at user (l,k)
  std::vector<std::vector<double>> rp;  // private rate
};
TrueRates true_rates(const SubproblemContext& ctx, const PrecoderSet& W,
                     const RISPhases& ris);

// p_lk = pc_eff + eta ||W_lk||^2 + (eta/K) ||W_l,common||^2
double user_power(const SubproblemContext& ctx, const PrecoderSet& W, int l, int k);

// min over users of the weighted metric (alpha * rate, or lambda * rate / p)
// with rates clamped at zero; nats-based.
double evaluate_objective(const SubproblemContext& ctx, ObjectiveKind obj,
                          const PrecoderSet& W, const RISPhases& ris,
                          const CommonRateSplit& t);

struct SplitResult {
  CommonRateSplit split;
  bool qos_feasible = true;
  double objective = 0.0;  // evaluate_objective at the returned split
};

// Per-cell water-level bisection: maximizes the minimum weighted metric over
// nonnegative splits with sum_k t_lk <= min_k rc_lk, respecting the QoS floor
// when it is feasible.
SplitResult optimize_split(const SubproblemContext& ctx, ObjectiveKind obj,
                           const PrecoderSet& W, const RISPhases& ris);

struct WUpdateResult {
  PrecoderSet W;
  CommonRateSplit split;
  double surrogate_objective = 0.0;  // lower bound on the achieved objective
  long newton_iters = 0;
  std::vector<double> mu_trace;      // GDA ratio sequence (EE only)
};

// One majorize-maximize step on the precoders at fixed RIS phases.
WUpdateResult solve_maxmin_rate_W(const SubproblemContext& ctx, const RISPhases& ris,
                                  const PrecoderSet& W0, const CommonRateSplit& t0,
                                  const SolverOptions& opts);

// Dinkelbach-style generalized fractional update: alternates the convex solve
// with the ratio update until the ratio gain drops below gamma2. Throws
// NonmonotoneError if the ratio ever decreases beyond tolerance.
WUpdateResult solve_maxmin_ee_W(const SubproblemContext& ctx, const RISPhases& ris,
                                const PrecoderSet& W0, const CommonRateSplit& t0,
                                const SolverOptions& opts, int max_gda, double gamma2);

struct RISUpdateResult {
  RISPhases ris;
  CommonRateSplit split;
  double surrogate_objective = 0.0;
  long newton_iters = 0;
  bool accepted = true;  // false when every CCP candidate was rejected
};

// Phase update over the relaxed |v| <= 1 set; returns the input when M = 0.
RISUpdateResult solve_ris_unitdisc(const SubproblemContext& ctx, ObjectiveKind obj,
                                   const PrecoderSet& W, const RISPhases& ris0,
                                   const CommonRateSplit& t0, const SolverOptions& opts);

// Convex-concave procedure for |v| = 1: linearized modulus floor with slack
// delta halved from delta0 to delta_min, candidates normalized to the unit
// circle and accepted only when the true objective does not degrade.
RISUpdateResult solve_ris_unitmod(const SubproblemContext& ctx, ObjectiveKind obj,
                                  const PrecoderSet& W, const RISPhases& ris0,
                                  const CommonRateSplit& t0, const SolverOptions& opts,
                                  double delta0, double delta_min);

} // namespace rsma
