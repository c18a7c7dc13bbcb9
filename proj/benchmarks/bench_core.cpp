#include <benchmark/benchmark.h>

#include "bmctx/data.hpp"
#include "bmctx/growth.hpp"
#include "bmctx/metrics.hpp"
#include "bmctx/model.hpp"

using namespace bmctx;

namespace {

RbmLayer make_layer(Eigen::Index visible, Eigen::Index hidden) {
  return RbmLayer(visible, hidden, 0.1, 42);
}

SceneVector sparse_scene(Eigen::Index n, int bits) {
  SceneVector v = SceneVector::Zero(n);
  for (int i = 0; i < bits; ++i) v[(i * 7) % n] = 1.0;
  return v;
}

}  // namespace

static void BM_HiddenActivations(benchmark::State& state) {
  const RbmLayer layer = make_layer(state.range(0), state.range(1));
  const SceneVector v = sparse_scene(state.range(0), 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hidden_activations(layer, v));
  }
}
BENCHMARK(BM_HiddenActivations)->Args({80, 10})->Args({320, 40});

static void BM_Cd1Update(benchmark::State& state) {
  RbmLayer layer = make_layer(state.range(0), state.range(1));
  const SceneVector v = sparse_scene(state.range(0), 8);
  for (auto _ : state) {
    cd1_update(layer, v);
    benchmark::DoNotOptimize(layer.weights.data());
  }
}
BENCHMARK(BM_Cd1Update)->Args({80, 10})->Args({320, 40});

static void BM_LayerMinDistance(benchmark::State& state) {
  const RbmLayer layer = make_layer(80, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(layer_min_distance(layer));
  }
}
BENCHMARK(BM_LayerMinDistance)->Arg(8)->Arg(16);

static void BM_GibbsReconstruct(benchmark::State& state) {
  std::vector<RbmLayer> stack;
  stack.push_back(make_layer(80, 9));
  stack.push_back(make_layer(9, 7));
  const SceneVector v = sparse_scene(80, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gibbs_reconstruct({stack.data(), stack.size()}, v, {}, state.range(0)));
  }
}
BENCHMARK(BM_GibbsReconstruct)->Arg(5)->Arg(20);

static void BM_IrbmProcessScene(benchmark::State& state) {
  SyntheticSpec spec;
  spec.scenes_per_context = 25;
  const Corpus corpus = generate_synthetic(spec);
  std::vector<SceneVector> scenes;
  for (const SceneRecord& rec : corpus.records) scenes.push_back(encode(rec, corpus.vocab));
  GrowingModel model = make_growing_model(Variant::iRBM, corpus.vocab.size(), {}, 1);
  std::size_t next = 0;
  for (auto _ : state) {
    irbm_process_scene(model, scenes[next]);
    next = (next + 1) % scenes.size();
  }
  state.counters["hidden_units"] = static_cast<double>(model.layers[0].hidden_units());
}
BENCHMARK(BM_IrbmProcessScene);

static void BM_ModelEntropy(benchmark::State& state) {
  SyntheticSpec spec;
  spec.scenes_per_context = 25;
  const Corpus corpus = generate_synthetic(spec);
  std::vector<SceneVector> scenes;
  for (const SceneRecord& rec : corpus.records) scenes.push_back(encode(rec, corpus.vocab));
  GrowingModel model = make_baseline_model(Variant::StackedRBM, corpus.vocab.size(), {9, 7}, {}, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model_entropy(model, scenes, 0.5));
  }
}
BENCHMARK(BM_ModelEntropy);

BENCHMARK_MAIN();
