#include <benchmark/benchmark.h>

#include "rsma/optimizer.hpp"

namespace {

// One fixed small scene per RIS size; channel draw and initialization are
// excluded from the timed region.
struct Scene {
  rsma::NetworkConfig cfg;
  rsma::ChannelSet ch;
  rsma::Allocation init;
  rsma::OptimizerOptions opts;

  explicit Scene(int n_ris) {
    cfg = rsma::NetworkConfig::scenario2();
    cfg.N_ris = n_ris;
    opts.enforce_qos = false;
    ch = rsma::draw_channels(cfg, cfg.geometry, 7);
    init = rsma::initialize(cfg, ch, opts, 7);
  }
};

void BM_PrecoderUpdate(benchmark::State& state) {
  Scene s(static_cast<int>(state.range(0)));
  const rsma::SubproblemContext ctx = rsma::make_context(s.cfg, s.ch, s.opts);
  for (auto _ : state) {
    auto res = rsma::solve_maxmin_rate_W(ctx, s.init.ris, s.init.precoders, s.init.split,
                                         s.opts.solver);
    benchmark::DoNotOptimize(res.surrogate_objective);
  }
}

void BM_PhaseUpdate(benchmark::State& state) {
  Scene s(static_cast<int>(state.range(0)));
  const rsma::SubproblemContext ctx = rsma::make_context(s.cfg, s.ch, s.opts);
  for (auto _ : state) {
    auto res = rsma::solve_ris_unitdisc(ctx, rsma::ObjectiveKind::SpectralEfficiency,
                                        s.init.precoders, s.init.ris, s.init.split,
                                        s.opts.solver);
    benchmark::DoNotOptimize(res.surrogate_objective);
  }
}

} // namespace

BENCHMARK(BM_PrecoderUpdate)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PhaseUpdate)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
