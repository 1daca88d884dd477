#pragma once

#include <map>
#include <utility>

#include "rsma/rates.hpp"

namespace rsma {

// FBL penalty parameters shared by every surrogate build. qinv = 0 reduces all
// bounds to their Shannon counterparts.
struct FblParams {
  double n = 256.0;
  double qinv_c = 0.0;
  double qinv_p = 0.0;
};

// Precoders, RIS setting and every derived statistic at the point the concave
// minorants are tangent to the true rates.
struct ExpansionPoint {
  PrecoderSet W;
  RISPhases ris;
  EffectiveChannels H;
  std::vector<std::vector<UserLinkStats>> stats;  // [l][k]
  std::vector<std::vector<double>> zeta_c;        // common-decoding dispersion
  std::vector<std::vector<double>> zeta_p;        // private-decoding dispersion

  static ExpansionPoint make(const NetworkConfig& cfg, const ChannelSet& ch,
                             const RISPhases& ris, const PrecoderSet& W);
};

enum class SurrogateKind { Private, Common };

// Precoder block id: (cell, user index) with user index -1 for the common
// precoder of that cell.
using BlockKey = std::pair<int, int>;

// Concave quadratic minorant of one FBL rate as a function of all precoders:
//   g(W) = a + sum_b 2 Re<lin[b], W_b> - sum_b Tr(W_b^H quad[b] W_b)
// tangent to the true rate at the expansion point.
struct SurrogateW {
  SurrogateKind kind = SurrogateKind::Private;
  int l = 0, k = 0;
  double a = 0.0;
  std::map<BlockKey, MatC> lin;   // N_bs x d coefficient per block
  std::map<BlockKey, MatC> quad;  // N_bs x N_bs PSD per block
  MatC B;                         // receive-side PSD core, diagnostics/tests

  double evaluate(const PrecoderSet& p) const;
};

// Same minorant viewed as a function of the RIS phases with precoders fixed:
//   g(v) = a + sum_i [ 2 Re Tr(Lmat[i]^H H_i(v)) - Tr(B H_i(v) X[i] H_i(v)^H) ]
// where H_i(v) is the effective channel from BS i to user (l,k).
struct SurrogateRIS {
  SurrogateKind kind = SurrogateKind::Private;
  int l = 0, k = 0;
  double a = 0.0;
  std::vector<MatC> Lmat;  // per cell, N_u x N_bs
  MatC B;                  // N_u x N_u PSD
  std::vector<MatC> X;     // per cell, N_bs x N_bs PSD

  double evaluate(const ChannelSet& ch, const RISPhases& ris) const;
};

// g(v) = c0 + 2 Re(c^T v) - v^H Q v over the stacked M*N_ris phase vector.
struct RISQuadratic {
  double c0 = 0.0;
  VecC c;
  MatC Q;  // Hermitian PSD

  double evaluate(const VecC& v) const;
};

// Throws DegenerateExpansionError when qinv > 0 and the expansion dispersion
// is below 1e-12 (the penalty linearization point is undefined there).
SurrogateW build_private_surrogate_W(const NetworkConfig& cfg, const ExpansionPoint& ep,
                                     int l, int k, const FblParams& fbl);
SurrogateW build_common_surrogate_W(const NetworkConfig& cfg, const ExpansionPoint& ep,
                                    int l, int k, const FblParams& fbl);

SurrogateRIS build_private_surrogate_RIS(const NetworkConfig& cfg, const ExpansionPoint& ep,
                                         int l, int k, const FblParams& fbl);
SurrogateRIS build_common_surrogate_RIS(const NetworkConfig& cfg, const ExpansionPoint& ep,
                                        int l, int k, const FblParams& fbl);

// Expands the channel's affine dependence on the phases element by element and
// collapses the surrogate to an explicit quadratic in the stacked phase vector.
RISQuadratic flatten_ris_surrogate(const SurrogateRIS& s, const ChannelSet& ch);

// Stacks ris.upsilon into one vector (cell-major) and back.
VecC stack_phases(const RISPhases& ris);
RISPhases unstack_phases(const VecC& v, int M, int N_ris, RisSet set);

} // namespace rsma
