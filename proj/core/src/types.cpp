#include "rsma/types.hpp"

namespace rsma {

PrecoderSet PrecoderSet::zeros(int L, int K, int N_bs, StreamMode mode) {
  const int d = (mode == StreamMode::SingleStream) ? 1 : N_bs;
  PrecoderSet p;
  p.stream_mode = mode;
  p.common.assign(L, MatC::Zero(N_bs, d));
  p.priv.assign(L, std::vector<MatC>(K, MatC::Zero(N_bs, d)));
  return p;
}

MatC transmit_covariance(const PrecoderSet& p, int l) {
  MatC C = p.common[l] * p.common[l].adjoint();
  for (const auto& w : p.priv[l]) C += w * w.adjoint();
  return C;
}

double transmit_power(const PrecoderSet& p, int l) {
  double s = p.common[l].squaredNorm();
  for (const auto& w : p.priv[l]) s += w.squaredNorm();
  return s;
}

bool RISPhases::feasible(double tol) const {
  for (const auto& v : upsilon) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double a = std::abs(v[i]);
      if (feasibility_set == RisSet::UnitDisc) {
        if (a > 1.0 + tol) return false;
      } else {
        if (std::abs(a - 1.0) > tol) return false;
      }
    }
  }
  return true;
}

RISPhases RISPhases::zeros(int M, int N_ris, RisSet set) {
  RISPhases r;
  r.feasibility_set = set;
  r.upsilon.assign(M, VecC::Zero(N_ris));
  return r;
}

CommonRateSplit CommonRateSplit::zeros(int L, int K) {
  CommonRateSplit s;
  s.t.assign(L, std::vector<double>(K, 0.0));
  return s;
}

double CommonRateSplit::cell_sum(int l) const {
  double s = 0.0;
  for (double v : t[l]) s += v;
  return s;
}

} // namespace rsma
