#include "rsma/channel.hpp"

#include <cmath>
#include <random>

namespace rsma {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream tags keep every link draw independent of evaluation order.
enum StreamTag : std::uint64_t {
  kTagUserPos = 1,
  kTagDirect = 2,
  kTagRisUser = 3,
  kTagBsRis = 4,
};

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t tag,
                           std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ (tag << 56));
  s = splitmix64(s ^ (a + 1));
  s = splitmix64(s ^ ((b + 1) << 20));
  s = splitmix64(s ^ ((c + 1) << 40));
  return std::mt19937_64(s);
}

MatC complex_gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> nd(0.0, 1.0);
  MatC m(rows, cols);
  const double s = std::sqrt(0.5);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double re = nd(rng), im = nd(rng);
      m(i, j) = cplx(s * re, s * im);
    }
  return m;
}

double distance(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

// Path gain relative to the configured noise floor.
double link_gain(const GeometryModel& g, double d, double exponent) {
  if (d <= 0.0) throw GeometryError("link distance is zero");
  const double loss_db = g.ref_loss_db + 10.0 * exponent * std::log10(std::max(d, 1.0));
  return std::pow(10.0, (-loss_db - g.noise_floor_db) / 10.0);
}

VecC ula_steering(double theta, int n) {
  VecC a(n);
  const double phase = M_PI * std::sin(theta);
  for (int p = 0; p < n; ++p) a[p] = std::polar(1.0, phase * p);
  return a;
}

double azimuth(const std::array<double, 2>& from, const std::array<double, 2>& to) {
  return std::atan2(to[1] - from[1], to[0] - from[0]);
}

MatC rician_matrix(std::mt19937_64& rng, double gain, double kappa,
                   const std::array<double, 2>& rx_pos, int rx_n,
                   const std::array<double, 2>& tx_pos, int tx_n) {
  const VecC a_rx = ula_steering(azimuth(rx_pos, tx_pos), rx_n);
  const VecC a_tx = ula_steering(azimuth(tx_pos, rx_pos), tx_n);
  const MatC los = a_rx * a_tx.adjoint();
  const MatC nlos = complex_gaussian(rng, rx_n, tx_n);
  const double amp = std::sqrt(gain);
  if (kappa > 1e12) return amp * los;
  const double c_los = std::sqrt(kappa / (1.0 + kappa));
  const double c_nlos = std::sqrt(1.0 / (1.0 + kappa));
  return amp * (c_los * los + c_nlos * nlos);
}

} // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (b + 0x9e3779b97f4a7c15ULL));
}

ChannelSet draw_channels(const NetworkConfig& cfg, const GeometryModel& geom,
                         std::uint64_t seed) {
  ChannelSet ch;
  ch.L = cfg.L;
  ch.K = cfg.K;
  ch.M = cfg.M;
  ch.seed = seed;

  // user drops, one stream per (l,k)
  std::vector<std::vector<std::array<double, 2>>> user_pos(cfg.L);
  for (int l = 0; l < cfg.L; ++l) {
    user_pos[l].resize(cfg.K);
    for (int k = 0; k < cfg.K; ++k) {
      auto rng = stream_rng(seed, kTagUserPos, l, k, 0);
      std::uniform_real_distribution<double> ud(0.0, 1.0);
      const double r = geom.drop_radius * std::sqrt(ud(rng));
      const double phi = 2.0 * M_PI * ud(rng);
      user_pos[l][k] = {geom.drop_center[l][0] + r * std::cos(phi),
                        geom.drop_center[l][1] + r * std::sin(phi)};
    }
  }

  ch.F.assign(cfg.L, std::vector<std::vector<MatC>>(cfg.K, std::vector<MatC>(cfg.L)));
  ch.Gru.assign(cfg.L, std::vector<std::vector<MatC>>(cfg.K, std::vector<MatC>(cfg.M)));
  ch.Gbr.assign(cfg.M, std::vector<MatC>(cfg.L));

  for (int l = 0; l < cfg.L; ++l)
    for (int k = 0; k < cfg.K; ++k)
      for (int i = 0; i < cfg.L; ++i) {
        auto rng = stream_rng(seed, kTagDirect, l, k, i);
        const double g = link_gain(geom, distance(user_pos[l][k], geom.bs_pos[i]),
                                   geom.pl_exp_direct);
        ch.F[l][k][i] = std::sqrt(g) * complex_gaussian(rng, cfg.N_u, cfg.N_bs);
      }

  for (int l = 0; l < cfg.L; ++l)
    for (int k = 0; k < cfg.K; ++k)
      for (int m = 0; m < cfg.M; ++m) {
        auto rng = stream_rng(seed, kTagRisUser, l, k, m);
        const double g = link_gain(geom, distance(user_pos[l][k], geom.ris_pos[m]),
                                   geom.pl_exp_ris);
        ch.Gru[l][k][m] = rician_matrix(rng, g, geom.rician_k, user_pos[l][k],
                                        cfg.N_u, geom.ris_pos[m], cfg.N_ris);
      }

  for (int m = 0; m < cfg.M; ++m)
    for (int i = 0; i < cfg.L; ++i) {
      auto rng = stream_rng(seed, kTagBsRis, m, i, 0);
      const double d = distance(geom.ris_pos[m], geom.bs_pos[i]);
      if (d <= 0.0) throw GeometryError("BS-RIS distance is zero");
      // the user-side leg already carries the noise normalization; the BS-side
      // leg of the cascade uses the raw path loss
      const double loss_db =
          geom.ref_loss_db + 10.0 * geom.pl_exp_ris * std::log10(std::max(d, 1.0));
      const double g = std::pow(10.0, -loss_db / 10.0);
      ch.Gbr[m][i] = rician_matrix(rng, g, geom.rician_k, geom.ris_pos[m],
                                   cfg.N_ris, geom.bs_pos[i], cfg.N_bs);
    }

  return ch;
}

MatC ris_scattering_matrix(const RISPhases& ris, int m) {
  return MatC(ris.upsilon[m].asDiagonal());
}

MatC effective_channel(const ChannelSet& ch, const RISPhases& ris, int l, int k, int i) {
  MatC H = ch.F[l][k][i];
  for (int m = 0; m < ch.M; ++m)
    H += ch.Gru[l][k][m] * ris.upsilon[m].asDiagonal() * ch.Gbr[m][i];
  return H;
}

EffectiveChannels compute_effective_channels(const ChannelSet& ch, const RISPhases& ris) {
  EffectiveChannels eff;
  eff.H.assign(ch.L, std::vector<std::vector<MatC>>(ch.K, std::vector<MatC>(ch.L)));
  for (int l = 0; l < ch.L; ++l)
    for (int k = 0; k < ch.K; ++k)
      for (int i = 0; i < ch.L; ++i)
        eff.H[l][k][i] = effective_channel(ch, ris, l, k, i);
  return eff;
}

ChannelSet without_ris_legs(const ChannelSet& ch) {
  ChannelSet out = ch;
  for (auto& lk : out.Gru)
    for (auto& kk : lk)
      for (auto& g : kk) g.setZero();
  for (auto& m : out.Gbr)
    for (auto& g : m) g.setZero();
  return out;
}

} // namespace rsma
