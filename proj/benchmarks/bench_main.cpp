#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qcons/codec.hpp"
#include "qcons/config.hpp"
#include "qcons/engine.hpp"
#include "qcons/graph.hpp"
#include "qcons/quantizer.hpp"

namespace {

qcons::Graph ring(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) edges.push_back({v, v + 1});
  edges.push_back({n, 1});
  return qcons::from_edge_list(n, edges);
}

void BM_spectral(benchmark::State& state) {
  qcons::Graph g = ring(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    qcons::SpectralData s = qcons::spectral(g);
    benchmark::DoNotOptimize(s.lambda2);
  }
}
BENCHMARK(BM_spectral)->Arg(5)->Arg(20)->Arg(50);

void BM_quantize(benchmark::State& state) {
  qcons::Quantizer qz(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(1);
  std::vector<double> vs(1024);
  for (auto& v : vs)
    v = ((rng() >> 11) * 0x1.0p-53 - 0.5) * 2.5 * state.range(0);
  for (auto _ : state)
    for (double v : vs) benchmark::DoNotOptimize(qcons::quantize(qz, v));
  state.SetItemsProcessed(state.iterations() * vs.size());
}
BENCHMARK(BM_quantize)->Arg(1)->Arg(10);

void BM_codec_round(benchmark::State& state) {
  qcons::ScalingSchedule sched{10.0, 0.93, qcons::ScalingMode::Floored, 0.1};
  qcons::Quantizer qz(10);
  std::mt19937_64 rng(2);
  for (auto _ : state) {
    qcons::EncoderState enc;
    qcons::DecoderState dec;
    double sig = 3.0;
    for (int k = 0; k < 256; ++k) {
      double beta = qcons::scaling_at(sched, k);
      sig += ((rng() >> 11) * 0x1.0p-53 - 0.5) * beta;
      auto er = qcons::encode_step(enc, sig, beta, qz);
      qcons::decode_step(dec, er.symbol, beta, qz);
    }
    benchmark::DoNotOptimize(dec.s_hat);
  }
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_codec_round);

void BM_closed_loop_second(benchmark::State& state) {
  qcons::RunSpec spec = qcons::make_preset("pendulum5");
  spec.duration = 1.0;
  qcons::SimConfig cfg = qcons::build_sim_config(spec);
  cfg.force = true;
  for (auto _ : state) {
    qcons::SimResult res = qcons::run(cfg);
    benchmark::DoNotOptimize(res.bits_total);
  }
}
BENCHMARK(BM_closed_loop_second)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
