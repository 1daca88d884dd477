#pragma once

#include "rsma/channel.hpp"
#include "rsma/types.hpp"

namespace rsma {

inline constexpr double kLn2 = 0.6931471805599453;

// Desired-signal covariance S and interference-plus-noise covariance D for
// one decoding step.
struct LinkStatistics {
  MatC S;
  MatC D;
};

struct FBLRateReport {
  double shannon = 0.0;     // nats
  double dispersion = 0.0;  // zeta, dimensionless
  double penalty = 0.0;     // nats
  double fbl = 0.0;         // shannon - penalty (may be negative)
  double fbl_clamped = 0.0; // max(0, fbl)
};

// Q^{-1}(eps), abs error <= 1e-10.
double inverse_q(double eps);

// ln det(I + D^{-1} S), via Cholesky log-dets.
double shannon_rate(const LinkStatistics& ls);

// 2 Tr(S (D+S)^{-1}), achievable by Gaussian signaling.
double achievable_dispersion(const LinkStatistics& ls);

// Tr(I - (I + D^{-1}S)^{-2}); diagnostic only.
double optimal_dispersion(const LinkStatistics& ls);

FBLRateReport fbl_rate(const LinkStatistics& ls, double n, double eps);
// Same with a precomputed Q^{-1}(eps); qinv = 0 recovers the Shannon rate.
FBLRateReport fbl_rate_qinv(const LinkStatistics& ls, double n, double qinv);

// Per-user receive statistics of Eqs. for common and private decoding:
//   Dc = sigma2 I + sum_j H_l W_lj W_lj^H H_l^H + sum_{i != l} H_i C_i H_i^H
//   D  = same without the own private term (j != k)
//   Sc = H_l W_l (.)^H,  S = H_l W_lk (.)^H
struct UserLinkStats {
  MatC D, Dc, S, Sc;
};

UserLinkStats link_stats(const NetworkConfig& cfg, const EffectiveChannels& eff,
                         const PrecoderSet& p, int l, int k);
UserLinkStats interference_covariances(const NetworkConfig& cfg, const ChannelSet& ch,
                                       const RISPhases& ris, const PrecoderSet& p,
                                       int l, int k);

// FBL rate of the common message at user (l,k): pair (Sc, Dc).
FBLRateReport common_decode_rate(const NetworkConfig& cfg, const UserLinkStats& s,
                                 double qinv_c);
// FBL rate of the private message: Shannon on (S, D), dispersion 2 Tr(S Dc^{-1}).
FBLRateReport private_rate(const NetworkConfig& cfg, const UserLinkStats& s,
                           double qinv_p);

double user_rate(const CommonRateSplit& split, double r_private, int l, int k);

// e_lk = rate_bits / (p_c + eta Tr(W_lk W_lk^H) + (eta/K) Tr(W_l W_l^H)).
// pc_override < 0 uses cfg.p_c.
double user_ee(double rate_bits, const PrecoderSet& p, int l, int k,
               const NetworkConfig& cfg, double pc_override = -1.0);

double combine_error_prob(double eps_c, double eps_p);

// r_th = 2n/(omega tau), in b/s/Hz resp. nats/channel-use.
double latency_threshold_bits(double n, double omega, double tau);
double latency_threshold_nats(double n, double omega, double tau);

// Single-stream FBL rate via the Sylvester determinant identity; equals the
// general matrix form applied to one-column precoders.
double single_stream_rate(const MatC& H, const VecC& w, const MatC& D_interf,
                          const MatC& D_disp, double n, double qinv);

} // namespace rsma
