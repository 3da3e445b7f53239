#include <benchmark/benchmark.h>

#include "surrocae/layers.hpp"
#include "surrocae/pooling.hpp"
#include "surrocae/rng.hpp"

using namespace surrocae;
using namespace surrocae::nn;

namespace {

template <typename T>
Tensor<T> rand_tensor(std::vector<std::size_t> shape, std::uint64_t seed) {
  Rng rng(seed);
  Tensor<T> t(std::move(shape));
  for (std::size_t i = 0; i < t.size(); ++i)
    t[i] = static_cast<T>(rng.uniform(-1.0, 1.0));
  return t;
}

// First encoder convolution of the transport-problem autoencoder at batch 16.
static void BM_Conv1dForwardF32(benchmark::State& state) {
  Conv1dLayer<float> layer;
  layer.filters = rand_tensor<float>({64, 200, 5}, 1);
  layer.bias = rand_tensor<float>({64}, 2);
  layer.stride = 2;
  layer.padding = 2;
  layer.act = Activation::relu;
  auto x = rand_tensor<float>({16, 200, 100}, 3);
  for (auto _ : state) {
    auto y = conv1d_forward(x, layer);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_Conv1dForwardF32)->Unit(benchmark::kMillisecond);

static void BM_Conv1dBackwardF32(benchmark::State& state) {
  Conv1dLayer<float> layer;
  layer.filters = rand_tensor<float>({64, 200, 5}, 1);
  layer.bias = rand_tensor<float>({64}, 2);
  layer.stride = 2;
  layer.padding = 2;
  layer.act = Activation::relu;
  auto x = rand_tensor<float>({16, 200, 100}, 3);
  ConvCache<float> cache;
  auto y = conv1d_forward(x, layer, &cache);
  auto g = rand_tensor<float>(y.shape(), 4);
  for (auto _ : state) {
    auto grads = conv1d_backward(g, layer, cache);
    benchmark::DoNotOptimize(grads.filters.data());
  }
  state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_Conv1dBackwardF32)->Unit(benchmark::kMillisecond);

static void BM_Deconv1dForwardF32(benchmark::State& state) {
  Deconv1dLayer<float> layer;
  layer.filters = rand_tensor<float>({64, 200, 5}, 5);
  layer.bias = rand_tensor<float>({200}, 6);
  layer.stride = 2;
  layer.crop = 3;
  auto x = rand_tensor<float>({16, 64, 50}, 7);
  for (auto _ : state) {
    auto y = deconv1d_forward(x, layer);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_Deconv1dForwardF32)->Unit(benchmark::kMillisecond);

static void BM_DenseForwardF32(benchmark::State& state) {
  DenseLayer<float> layer;
  layer.weights = rand_tensor<float>({256, 256}, 8);
  layer.bias = rand_tensor<float>({256}, 9);
  layer.act = Activation::relu;
  auto x = rand_tensor<float>({100, 256}, 10);
  for (auto _ : state) {
    auto y = dense_forward(x, layer);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_DenseForwardF32)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
