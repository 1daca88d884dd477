#pragma once

#include <cstdint>

#include "rsma/types.hpp"

namespace rsma {

// One Monte Carlo channel draw. Indexing follows (cell l, user k, BS i / RIS m).
struct ChannelSet {
  int L = 0, K = 0, M = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::vector<MatC>>> F;    // [l][k][i], N_u x N_bs direct
  std::vector<std::vector<std::vector<MatC>>> Gru;  // [l][k][m], N_u x N_ris RIS->user
  std::vector<std::vector<MatC>> Gbr;               // [m][i], N_ris x N_bs BS->RIS
};

// splitmix64 mix; used to derive one independent stream per (trial, link).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

ChannelSet draw_channels(const NetworkConfig& cfg, const GeometryModel& geom,
                         std::uint64_t seed);

// diag(v_m1 .. v_mN)
MatC ris_scattering_matrix(const RISPhases& ris, int m);

// H_lk,i = sum_m Gru[l][k][m] * diag(v_m) * Gbr[m][i] + F[l][k][i]
MatC effective_channel(const ChannelSet& ch, const RISPhases& ris, int l, int k, int i);

// All H_lk,i for a fixed RIS setting.
struct EffectiveChannels {
  std::vector<std::vector<std::vector<MatC>>> H;  // [l][k][i]
};
EffectiveChannels compute_effective_channels(const ChannelSet& ch, const RISPhases& ris);

// Zero out both RIS legs (no-RIS baseline keeps the direct links only).
ChannelSet without_ris_legs(const ChannelSet& ch);

} // namespace rsma
