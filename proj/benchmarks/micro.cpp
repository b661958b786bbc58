#include <benchmark/benchmark.h>

#include <random>

#include "wmarena/bch.hpp"
#include "wmarena/codecs.hpp"
#include "wmarena/features.hpp"
#include "wmarena/quality.hpp"
#include "wmarena/synth.hpp"
#include "wmarena/transforms.hpp"

using namespace wmarena;

namespace {

void BM_Fft2(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ImagePlane y = luminance(synth_image(1, n, n));
  for (auto _ : state) benchmark::DoNotOptimize(fft2(y));
}
BENCHMARK(BM_Fft2)->Arg(256)->Arg(512);

void BM_Embed(benchmark::State& state, const std::string& codec) {
  const RgbImage img = synth_image(2);
  const WatermarkKey key{seed_from_integer(2), codec};
  const auto msg = random_message(codec, key);
  for (auto _ : state) benchmark::DoNotOptimize(embed(codec, img, key, msg));
}

void BM_Detect(benchmark::State& state, const std::string& codec) {
  const WatermarkKey key{seed_from_integer(3), codec};
  const auto msg = random_message(codec, key);
  const RgbImage wm = embed(codec, synth_image(3), key, msg);
  for (auto _ : state) benchmark::DoNotOptimize(detect(codec, wm, key, msg));
}

void BM_BchDecode(benchmark::State& state) {
  const BchCode& code = default_bch();
  std::mt19937_64 rng(4);
  std::vector<std::uint8_t> data(code.data_bits());
  for (auto& b : data) b = rng() & 1;
  auto word = code.encode(data);
  for (int i = 0; i < state.range(0); ++i) word[i * 7] ^= 1;
  for (auto _ : state) benchmark::DoNotOptimize(code.decode(word));
}
BENCHMARK(BM_BchDecode)->DenseRange(0, 5);

void BM_ExtractFeatures(benchmark::State& state) {
  const RgbImage img = synth_image(5);
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(img));
}
BENCHMARK(BM_ExtractFeatures);

void BM_QualityVector(benchmark::State& state) {
  const RgbImage a = synth_image(6);
  const RgbImage b = embed("pix-wide", a, WatermarkKey{seed_from_integer(6), "pix-wide"},
                           random_message("pix-wide", WatermarkKey{seed_from_integer(6), "pix-wide"}));
  for (auto _ : state) benchmark::DoNotOptimize(quality_vector(a, b));
}
BENCHMARK(BM_QualityVector);

const bool registered = [] {
  for (const auto& d : registry()) {
    benchmark::RegisterBenchmark(("BM_Embed/" + d.id).c_str(), BM_Embed, d.id);
    benchmark::RegisterBenchmark(("BM_Detect/" + d.id).c_str(), BM_Detect, d.id);
  }
  return true;
}();

}  // namespace

BENCHMARK_MAIN();
