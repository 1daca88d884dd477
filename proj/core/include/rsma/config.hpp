#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace rsma {

// RIS element feasibility sets: unit disc |v| <= 1, unit modulus |v| = 1.
enum class RisSet { UnitDisc, UnitModulus };

struct GeometryModel {
  std::vector<std::array<double, 2>> bs_pos;      // per BS, meters
  std::vector<std::array<double, 2>> ris_pos;     // per RIS
  std::vector<std::array<double, 2>> drop_center; // user drop disc per cell
  double drop_radius = 50.0;

  double pl_exp_direct = 3.75; // NLoS BS-user exponent
  double pl_exp_ris = 2.2;     // per RIS leg
  double ref_loss_db = 30.0;   // reference loss at 1 m
  // Channel gains are expressed relative to this noise power so that the
  // power budget stays on the dB scale the figures use (sigma2 = 1).
  double noise_floor_db = -90.0;
  double rician_k = 3.0;       // RIS-leg Rician factor
};

// Two-cell default layout: BSs 200 m apart, one RIS 20 m from its BS,
// users dropped in a 50 m disc around each RIS.
GeometryModel default_geometry(int L, int M);

struct NetworkConfig {
  int L = 2;  // cells
  int K = 3;  // users per cell
  int M = 2;  // RIS count
  int N_bs = 2;
  int N_u = 2;
  int N_ris = 20;

  double P = 10.0;     // per-BS power budget, linear relative to unit noise
  double sigma2 = 1.0; // noise variance per receive antenna
  double n = 256.0;    // block length in symbols
  double eps_c = 5e-6;
  double eps_p = 5e-6;
  double omega = 1e7;  // bandwidth, Hz
  double tau = 1e-3;   // latency target, s

  std::vector<std::vector<double>> alpha;  // LxK rate weights; empty = all 1
  std::vector<std::vector<double>> lambda; // LxK EE weights; empty = all 1

  double p_c = 1.0;       // static power per user, W
  double eta = 3.0;       // inverse power-amplifier efficiency
  double ris_power = 1.0; // W per RIS, used for the no-RIS static-power offset

  GeometryModel geometry;
  RisSet feasibility_set = RisSet::UnitDisc;

  double weight_alpha(int l, int k) const {
    return alpha.empty() ? 1.0 : alpha[l][k];
  }
  double weight_lambda(int l, int k) const {
    return lambda.empty() ? 1.0 : lambda[l][k];
  }

  static NetworkConfig scenario1();
  static NetworkConfig scenario2();
};

struct ValidationError {
  std::string field;
  std::string reason;
};

// Returns nullopt when every invariant holds, otherwise the first violation.
std::optional<ValidationError> validate_config(const NetworkConfig& cfg);

} // namespace rsma
