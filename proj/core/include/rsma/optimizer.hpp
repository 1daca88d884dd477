#pragma once

#include "rsma/subproblems.hpp"

namespace rsma {

// Composable design variants. common_enabled=false is treat-interference-as-
// noise (no rate splitting); no_ris zeroes both RIS legs and, for the energy
// objective, removes the saved per-user RIS static power share; random_ris
// keeps the initial random phases fixed; shannon_design optimizes with the
// penalty-free rates (evaluation still reports FBL rates); single_stream uses
// one-column precoders.
struct ModeFlags {
  bool common_enabled = true;
  bool no_ris = false;
  bool random_ris = false;
  bool shannon_design = false;
  bool single_stream = false;
};

struct OptimizerOptions {
  ObjectiveKind objective = ObjectiveKind::SpectralEfficiency;
  ModeFlags mode;
  double gamma1 = 1e-4;     // relative improvement stop for the outer loop
  double gamma2 = 1e-3;     // fractional-programming ratio stop
  int max_outer = 100;
  int max_gda = 20;
  int repair_iters = 10;    // QoS feasibility repair passes at initialization
  double ccp_delta0 = 0.05;
  double ccp_delta_min = 1e-3;
  bool enforce_qos = true;  // latency floor r_th = 2n/(omega tau)
  SolverOptions solver;
};

// Derived per-run constants shared by all subproblem calls.
SubproblemContext make_context(const NetworkConfig& cfg, const ChannelSet& ch,
                               const OptimizerOptions& opts);

// Random power-exact precoders, unit-modulus random phases, zero split; then
// up to repair_iters penalty-free max-min passes until the QoS floor holds.
// Throws InfeasibleStartError when repair fails.
Allocation initialize(const NetworkConfig& cfg, const ChannelSet& ch,
                      const OptimizerOptions& opts, std::uint64_t seed);

// Full alternating optimization from a fresh initialization.
Allocation optimize(const NetworkConfig& cfg, const ChannelSet& ch,
                    const OptimizerOptions& opts, std::uint64_t seed);

// Continues alternating optimization from a given allocation.
Allocation optimize_from(const NetworkConfig& cfg, const ChannelSet& ch,
                         const OptimizerOptions& opts, const Allocation& start);

struct AuditReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Re-derives every constraint and the objective from scratch at tol 1e-6.
AuditReport evaluate_allocation(const NetworkConfig& cfg, const ChannelSet& ch,
                                const OptimizerOptions& opts, const Allocation& alloc);

} // namespace rsma
