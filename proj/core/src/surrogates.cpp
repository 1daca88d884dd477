#include "rsma/surrogates.hpp"

#include <cmath>

namespace rsma {

namespace {

MatC hpd_inverse(const MatC& A) {
  Eigen::LLT<MatC> llt(A);
  if (llt.info() != Eigen::Success) {
    MatC Ar = A;
    Ar.diagonal().array() += 1e-12 * std::max(1.0, A.diagonal().real().maxCoeff());
    llt.compute(Ar);
    if (llt.info() != Eigen::Success)
      throw SingularityError("surrogate expansion covariance is not positive definite");
  }
  return llt.solve(MatC::Identity(A.rows(), A.cols()));
}

const MatC& block(const PrecoderSet& W, const BlockKey& b) {
  return b.second < 0 ? W.common[b.first] : W.priv[b.first][b.second];
}

std::vector<BlockKey> all_blocks(int L, int K) {
  std::vector<BlockKey> v;
  for (int i = 0; i < L; ++i) {
    v.push_back({i, -1});
    for (int j = 0; j < K; ++j) v.push_back({i, j});
  }
  return v;
}

// Everything shared between the W-space and phase-space forms of one minorant.
struct CoreParts {
  BlockKey signal;
  std::vector<BlockKey> interf;
  MatC M1;       // Omega^{-1} Gamma
  MatC Phi_inv;  // (Omega + Gamma Gamma^H)^{-1}
  MatC B;        // M2 + kappa N3
  double kappa = 0.0;
  double a = 0.0;
};

CoreParts build_core(const NetworkConfig& cfg, const ExpansionPoint& ep, int l, int k,
                     SurrogateKind kind, const FblParams& fbl) {
  const UserLinkStats& st = ep.stats[l][k];
  const int Nu = cfg.N_u;
  CoreParts cp;

  MatC Omega, Phi, Gamma;
  double zeta, qinv;
  if (kind == SurrogateKind::Private) {
    cp.signal = {l, k};
    Omega = st.D;
    Phi = st.Dc;  // D + S
    Gamma = ep.H.H[l][k][l] * ep.W.priv[l][k];
    zeta = ep.zeta_p[l][k];
    qinv = fbl.qinv_p;
  } else {
    cp.signal = {l, -1};
    Omega = st.Dc;
    Phi = st.Dc + st.Sc;
    Gamma = ep.H.H[l][k][l] * ep.W.common[l];
    zeta = ep.zeta_c[l][k];
    qinv = fbl.qinv_c;
  }
  for (const BlockKey& b : all_blocks(cfg.L, cfg.K)) {
    if (b == cp.signal) continue;
    if (b.first == l && b.second < 0) continue;  // own common removed by SIC
    cp.interf.push_back(b);
  }

  const MatC Omega_inv = hpd_inverse(Omega);
  cp.Phi_inv = hpd_inverse(Phi);
  cp.M1 = Omega_inv * Gamma;

  if (qinv > 0.0) {
    if (zeta < 1e-12)
      throw DegenerateExpansionError("dispersion vanishes at the expansion point");
    cp.kappa = qinv / (std::sqrt(fbl.n) * std::sqrt(zeta));
  }

  const MatC M2 = Omega_inv - cp.Phi_inv;
  MatC B = M2;
  if (cp.kappa > 0.0) B += cp.kappa * (cp.Phi_inv * Omega * cp.Phi_inv);
  cp.B = 0.5 * (B + B.adjoint().eval());

  const double fbar = shannon_rate({Gamma * Gamma.adjoint(), Omega});
  const double sig2_tr_phi = cfg.sigma2 * cp.Phi_inv.trace().real();
  cp.a = fbar - (Omega_inv * (Gamma * Gamma.adjoint())).trace().real() -
         qinv * std::sqrt(zeta / fbl.n) * 0.5 - cp.kappa * Nu +
         2.0 * cp.kappa * sig2_tr_phi - cfg.sigma2 * cp.B.trace().real();
  return cp;
}

SurrogateW build_w(const NetworkConfig& cfg, const ExpansionPoint& ep, int l, int k,
                   SurrogateKind kind, const FblParams& fbl) {
  CoreParts cp = build_core(cfg, ep, l, k, kind, fbl);
  SurrogateW s;
  s.kind = kind;
  s.l = l;
  s.k = k;
  s.a = cp.a;
  s.B = cp.B;

  auto Hof = [&](int i) -> const MatC& { return ep.H.H[l][k][i]; };
  s.quad[cp.signal] = Hof(cp.signal.first).adjoint() * cp.B * Hof(cp.signal.first);
  s.lin[cp.signal] = Hof(cp.signal.first).adjoint() * cp.M1;
  for (const BlockKey& b : cp.interf) {
    const MatC& Hi = Hof(b.first);
    s.quad[b] = Hi.adjoint() * cp.B * Hi;
    if (cp.kappa > 0.0) {
      const MatC Abar = Hi * block(ep.W, b);
      s.lin[b] = cp.kappa * (Hi.adjoint() * (cp.Phi_inv * Abar));
    }
  }
  return s;
}

SurrogateRIS build_ris(const NetworkConfig& cfg, const ExpansionPoint& ep, int l, int k,
                       SurrogateKind kind, const FblParams& fbl) {
  CoreParts cp = build_core(cfg, ep, l, k, kind, fbl);
  SurrogateRIS s;
  s.kind = kind;
  s.l = l;
  s.k = k;
  s.a = cp.a;
  s.B = cp.B;
  s.X.assign(cfg.L, MatC::Zero(cfg.N_bs, cfg.N_bs));
  s.Lmat.assign(cfg.L, MatC::Zero(cfg.N_u, cfg.N_bs));

  const MatC& Wsig = block(ep.W, cp.signal);
  s.X[cp.signal.first] += Wsig * Wsig.adjoint();
  MatC Xtilde_own = MatC::Zero(cfg.N_bs, cfg.N_bs);  // own-cell interferers only
  for (const BlockKey& b : cp.interf) {
    const MatC& Wb = block(ep.W, b);
    s.X[b.first] += Wb * Wb.adjoint();
    if (b.first == l) Xtilde_own += Wb * Wb.adjoint();
  }

  s.Lmat[l] = cp.M1 * Wsig.adjoint();
  if (cp.kappa > 0.0) {
    for (int i = 0; i < cfg.L; ++i) {
      const MatC& Hi = ep.H.H[l][k][i];
      const MatC& Xt = (i == l) ? Xtilde_own : s.X[i];
      s.Lmat[i] += cp.kappa * (cp.Phi_inv * (Hi * Xt));
    }
  }
  return s;
}

} // namespace

ExpansionPoint ExpansionPoint::make(const NetworkConfig& cfg, const ChannelSet& ch,
                                    const RISPhases& ris, const PrecoderSet& W) {
  ExpansionPoint ep;
  ep.W = W;
  ep.ris = ris;
  ep.H = compute_effective_channels(ch, ris);
  ep.stats.assign(cfg.L, std::vector<UserLinkStats>(cfg.K));
  ep.zeta_c.assign(cfg.L, std::vector<double>(cfg.K, 0.0));
  ep.zeta_p.assign(cfg.L, std::vector<double>(cfg.K, 0.0));
  for (int l = 0; l < cfg.L; ++l)
    for (int k = 0; k < cfg.K; ++k) {
      ep.stats[l][k] = link_stats(cfg, ep.H, W, l, k);
      const UserLinkStats& st = ep.stats[l][k];
      ep.zeta_c[l][k] = achievable_dispersion({st.Sc, st.Dc});
      ep.zeta_p[l][k] = achievable_dispersion({st.S, st.D});
    }
  return ep;
}

double SurrogateW::evaluate(const PrecoderSet& p) const {
  double v = a;
  for (const auto& [key, C] : lin) {
    const MatC& W = key.second < 0 ? p.common[key.first] : p.priv[key.first][key.second];
    v += 2.0 * (C.adjoint() * W).trace().real();
  }
  for (const auto& [key, Q] : quad) {
    const MatC& W = key.second < 0 ? p.common[key.first] : p.priv[key.first][key.second];
    v -= (W.adjoint() * Q * W).trace().real();
  }
  return v;
}

double SurrogateRIS::evaluate(const ChannelSet& ch, const RISPhases& ris) const {
  double v = a;
  for (std::size_t i = 0; i < Lmat.size(); ++i) {
    const MatC Hi = effective_channel(ch, ris, l, k, static_cast<int>(i));
    v += 2.0 * (Lmat[i].adjoint() * Hi).trace().real();
    v -= (B * Hi * X[i] * Hi.adjoint()).trace().real();
  }
  return v;
}

double RISQuadratic::evaluate(const VecC& v) const {
  return c0 + 2.0 * (c.transpose() * v)(0).real() - (v.adjoint() * Q * v)(0).real();
}

SurrogateW build_private_surrogate_W(const NetworkConfig& cfg, const ExpansionPoint& ep,
                                     int l, int k, const FblParams& fbl) {
  return build_w(cfg, ep, l, k, SurrogateKind::Private, fbl);
}
SurrogateW build_common_surrogate_W(const NetworkConfig& cfg, const ExpansionPoint& ep,
                                    int l, int k, const FblParams& fbl) {
  return build_w(cfg, ep, l, k, SurrogateKind::Common, fbl);
}
SurrogateRIS build_private_surrogate_RIS(const NetworkConfig& cfg, const ExpansionPoint& ep,
                                         int l, int k, const FblParams& fbl) {
  return build_ris(cfg, ep, l, k, SurrogateKind::Private, fbl);
}
SurrogateRIS build_common_surrogate_RIS(const NetworkConfig& cfg, const ExpansionPoint& ep,
                                        int l, int k, const FblParams& fbl) {
  return build_ris(cfg, ep, l, k, SurrogateKind::Common, fbl);
}

VecC stack_phases(const RISPhases& ris) {
  Eigen::Index total = 0;
  for (const auto& u : ris.upsilon) total += u.size();
  VecC v(total);
  Eigen::Index at = 0;
  for (const auto& u : ris.upsilon) {
    v.segment(at, u.size()) = u;
    at += u.size();
  }
  return v;
}

RISPhases unstack_phases(const VecC& v, int M, int N_ris, RisSet set) {
  RISPhases r = RISPhases::zeros(M, N_ris, set);
  for (int m = 0; m < M; ++m) r.upsilon[m] = v.segment(m * N_ris, N_ris);
  return r;
}

RISQuadratic flatten_ris_surrogate(const SurrogateRIS& s, const ChannelSet& ch) {
  const int M = ch.M;
  const int Nr = M > 0 ? static_cast<int>(ch.Gbr[0][0].rows()) : 0;
  const int MN = M * Nr;
  const int L = static_cast<int>(s.X.size());
  const int Nu = static_cast<int>(s.B.rows());
  const int Nb = static_cast<int>(s.X[0].rows());

  RISQuadratic out;
  out.c = VecC::Zero(MN);
  out.Q = MatC::Zero(MN, MN);
  out.c0 = s.a;

  // columns a_q of the user-side legs, shared across cells
  MatC Acols(Nu, MN);
  for (int m = 0; m < M; ++m)
    for (int p = 0; p < Nr; ++p) Acols.col(m * Nr + p) = ch.Gru[s.l][s.k][m].col(p);
  const MatC Amat = MN > 0 ? MatC(Acols.adjoint() * s.B * Acols) : MatC();

  for (int i = 0; i < L; ++i) {
    const MatC& F = ch.F[s.l][s.k][i];
    out.c0 += 2.0 * (s.Lmat[i].adjoint() * F).trace().real();
    out.c0 -= (s.B * F * s.X[i] * F.adjoint()).trace().real();
    if (MN == 0) continue;

    MatC Bi(MN, Nb);  // rows b_q of the BS-side legs toward cell i
    for (int m = 0; m < M; ++m)
      for (int p = 0; p < Nr; ++p) Bi.row(m * Nr + p) = ch.Gbr[m][i].row(p);

    out.Q += Amat.cwiseProduct(MatC(Bi * s.X[i] * Bi.adjoint()).transpose());
    const MatC T = s.Lmat[i].adjoint() - s.X[i] * F.adjoint() * s.B;
    out.c += MatC(Bi * T * Acols).diagonal();
  }
  out.Q = 0.5 * (out.Q + out.Q.adjoint().eval());
  return out;
}

} // namespace rsma
