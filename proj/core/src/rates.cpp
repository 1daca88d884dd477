#include "rsma/rates.hpp"

#include <cmath>

namespace rsma {

namespace {

// log det of a Hermitian positive-definite matrix via Cholesky.
double logdet_hpd(const MatC& A) {
  Eigen::LLT<MatC> llt(A);
  if (llt.info() != Eigen::Success)
    throw SingularityError("matrix is not positive definite");
  double s = 0.0;
  const auto& L = llt.matrixLLT();
  for (Eigen::Index i = 0; i < A.rows(); ++i) s += std::log(L(i, i).real());
  return 2.0 * s;
}

MatC regularized(const MatC& D) {
  // sigma2 I already floors D in well-posed configs; tiny jitter only as a
  // guard for near-singular inputs
  Eigen::LLT<MatC> llt(D);
  if (llt.info() == Eigen::Success) return D;
  MatC Dr = D;
  Dr.diagonal().array() += 1e-12 * D.diagonal().real().maxCoeff();
  return Dr;
}

double std_normal_q(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Acklam-style initial guess for the standard normal quantile.
double norm_quantile_approx(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > phigh) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5, r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

} // namespace

double inverse_q(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("inverse_q: eps outside (0,1)");
  // Q^{-1}(eps) = -Phi^{-1}(eps); refine with Newton on Q(x) - eps
  double x = -norm_quantile_approx(eps);
  for (int it = 0; it < 8; ++it) {
    const double f = std_normal_q(x) - eps;
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    if (pdf <= 0.0) break;
    const double dx = f / pdf;  // Q' = -pdf
    x += dx;
    if (std::abs(dx) < 1e-13 * (1.0 + std::abs(x))) break;
  }
  return x;
}

double shannon_rate(const LinkStatistics& ls) {
  const MatC D = regularized(ls.D);
  return logdet_hpd(D + ls.S) - logdet_hpd(D);
}

double achievable_dispersion(const LinkStatistics& ls) {
  const MatC T = regularized(ls.D + ls.S);
  Eigen::LDLT<MatC> ldlt(T);
  if (ldlt.info() != Eigen::Success)
    throw SingularityError("D + S is numerically singular");
  return 2.0 * ldlt.solve(ls.S).trace().real();
}

double optimal_dispersion(const LinkStatistics& ls) {
  const MatC D = regularized(ls.D);
  Eigen::LDLT<MatC> ldlt(D);
  if (ldlt.info() != Eigen::Success)
    throw SingularityError("D is numerically singular");
  const Eigen::Index m = D.rows();
  const MatC G = MatC::Identity(m, m) + ldlt.solve(ls.S);
  const MatC Ginv = G.inverse();
  return (MatC::Identity(m, m) - Ginv * Ginv).trace().real();
}

FBLRateReport fbl_rate_qinv(const LinkStatistics& ls, double n, double qinv) {
  FBLRateReport rep;
  rep.shannon = shannon_rate(ls);
  rep.dispersion = achievable_dispersion(ls);
  rep.penalty = qinv * std::sqrt(rep.dispersion / n);
  rep.fbl = rep.shannon - rep.penalty;
  rep.fbl_clamped = std::max(0.0, rep.fbl);
  return rep;
}

FBLRateReport fbl_rate(const LinkStatistics& ls, double n, double eps) {
  if (!(n >= 1.0)) throw DomainError("fbl_rate: n must be >= 1");
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("fbl_rate: eps outside (0, 0.5)");
  return fbl_rate_qinv(ls, n, inverse_q(eps));
}

UserLinkStats link_stats(const NetworkConfig& cfg, const EffectiveChannels& eff,
                         const PrecoderSet& p, int l, int k) {
  const int Nu = static_cast<int>(eff.H[l][k][0].rows());
  UserLinkStats s;
  const MatC& Hll = eff.H[l][k][l];
  s.Sc = Hll * p.common[l] * p.common[l].adjoint() * Hll.adjoint();
  s.S = Hll * p.priv[l][k] * p.priv[l][k].adjoint() * Hll.adjoint();
  MatC D = cfg.sigma2 * MatC::Identity(Nu, Nu);
  for (int j = 0; j < cfg.K; ++j) {
    if (j == k) continue;
    const MatC hw = Hll * p.priv[l][j];
    D += hw * hw.adjoint();
  }
  for (int i = 0; i < cfg.L; ++i) {
    if (i == l) continue;
    const MatC& Hi = eff.H[l][k][i];
    D += Hi * transmit_covariance(p, i) * Hi.adjoint();
  }
  s.D = D;
  s.Dc = D + s.S;
  return s;
}

UserLinkStats interference_covariances(const NetworkConfig& cfg, const ChannelSet& ch,
                                       const RISPhases& ris, const PrecoderSet& p,
                                       int l, int k) {
  const EffectiveChannels eff = compute_effective_channels(ch, ris);
  return link_stats(cfg, eff, p, l, k);
}

FBLRateReport common_decode_rate(const NetworkConfig& cfg, const UserLinkStats& s,
                                 double qinv_c) {
  return fbl_rate_qinv({s.Sc, s.Dc}, cfg.n, qinv_c);
}

FBLRateReport private_rate(const NetworkConfig& cfg, const UserLinkStats& s,
                           double qinv_p) {
  // Shannon part on (S, D); the dispersion pairs S with Dc = D + S
  FBLRateReport rep;
  rep.shannon = shannon_rate({s.S, s.D});
  rep.dispersion = achievable_dispersion({s.S, s.D});
  rep.penalty = qinv_p * std::sqrt(rep.dispersion / cfg.n);
  rep.fbl = rep.shannon - rep.penalty;
  rep.fbl_clamped = std::max(0.0, rep.fbl);
  return rep;
}

double user_rate(const CommonRateSplit& split, double r_private, int l, int k) {
  return split.t[l][k] + r_private;
}

double user_ee(double rate_bits, const PrecoderSet& p, int l, int k,
               const NetworkConfig& cfg, double pc_override) {
  const double pc = pc_override < 0.0 ? cfg.p_c : pc_override;
  const double denom = pc + cfg.eta * p.priv[l][k].squaredNorm() +
                       cfg.eta / cfg.K * p.common[l].squaredNorm();
  if (!(denom > 0.0)) throw DomainError("user_ee: nonpositive power");
  return rate_bits / denom;
}

double combine_error_prob(double eps_c, double eps_p) {
  return eps_c + (1.0 - eps_c) * eps_p;
}

double latency_threshold_bits(double n, double omega, double tau) {
  if (!(omega * tau > 0.0)) throw DomainError("latency_threshold: omega*tau <= 0");
  return 2.0 * n / (omega * tau);
}

double latency_threshold_nats(double n, double omega, double tau) {
  return latency_threshold_bits(n, omega, tau) * kLn2;
}

double single_stream_rate(const MatC& H, const VecC& w, const MatC& D_interf,
                          const MatC& D_disp, double n, double qinv) {
  const VecC hw = H * w;
  const double sinr = (hw.adjoint() * D_interf.inverse() * hw)(0).real();
  const double disp = 2.0 * (hw.adjoint() * D_disp.inverse() * hw)(0).real();
  return std::log1p(sinr) - qinv * std::sqrt(disp / n);
}

} // namespace rsma
