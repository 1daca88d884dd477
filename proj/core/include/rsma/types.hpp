#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsma/config.hpp"

namespace rsma {

using cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using MatR = Eigen::MatrixXd;
using VecR = Eigen::VectorXd;

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateExpansionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleStartError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonmonotoneError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class StreamMode { Full, SingleStream };

// Common precoder per BS plus private precoder per user. Full mode uses
// N_bs x N_bs matrices, single-stream mode one-column vectors.
struct PrecoderSet {
  std::vector<MatC> common;              // L matrices, N_bs x d
  std::vector<std::vector<MatC>> priv;   // L x K matrices, N_bs x d
  StreamMode stream_mode = StreamMode::Full;

  int cells() const { return static_cast<int>(common.size()); }
  int users_per_cell() const { return priv.empty() ? 0 : static_cast<int>(priv[0].size()); }
  static PrecoderSet zeros(int L, int K, int N_bs, StreamMode mode);
};

// C_l = W_l W_l^H + sum_k W_lk W_lk^H
MatC transmit_covariance(const PrecoderSet& p, int l);
double transmit_power(const PrecoderSet& p, int l);

struct RISPhases {
  std::vector<VecC> upsilon;  // M vectors of length N_ris
  RisSet feasibility_set = RisSet::UnitDisc;

  int ris_count() const { return static_cast<int>(upsilon.size()); }
  bool feasible(double tol = 1e-12) const;
  static RISPhases zeros(int M, int N_ris, RisSet set);
};

struct CommonRateSplit {
  std::vector<std::vector<double>> t;  // L x K, nats/channel-use

  static CommonRateSplit zeros(int L, int K);
  double cell_sum(int l) const;
};

struct ConvergenceTrace {
  std::vector<double> objective;          // per outer iteration (index 0 = initial)
  std::vector<double> after_w_update;
  std::vector<double> after_ris_update;
  std::vector<std::vector<double>> gda_mu; // mu sequence per outer iteration (EE)
  double wall_ms = 0.0;
  long subproblem_newton_iters = 0;
  std::string stop_reason;
};

struct Allocation {
  PrecoderSet precoders;
  RISPhases ris;
  CommonRateSplit split;
  std::vector<std::vector<double>> rates; // clamped per-user rates, nats
  std::vector<std::vector<double>> ees;   // per-user EE, bits/J scale
  double objective = 0.0;                 // min weighted rate (nats) or EE
  ConvergenceTrace trace;
};

} // namespace rsma
