#include <benchmark/benchmark.h>

#include "adpipe/compositing.hpp"
#include "adpipe/mock_backends.hpp"

namespace {

adpipe::CutoutObject disc_cutout(int size) {
    adpipe::MockGenerator generator;
    const adpipe::SceneImage disc = generator.generate("benchmark object", "", 0, size);
    return adpipe::matte_from_white(disc);
}

void BM_MatteFromWhite(benchmark::State& state) {
    adpipe::MockGenerator generator;
    const adpipe::SceneImage disc =
        generator.generate("benchmark object", "", 0, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(adpipe::matte_from_white(disc));
    }
}
BENCHMARK(BM_MatteFromWhite)->Arg(64)->Arg(256);

void BM_AlphaComposite(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const adpipe::SceneImage scene = adpipe::SceneImage::create(512, 512, {120, 130, 140});
    const adpipe::CutoutObject cut =
        adpipe::resize_to_box(disc_cutout(128), {0, 0, double(size), double(size)});
    const adpipe::PlacementBox box{64, 64, 64.0 + size, 64.0 + size};
    for (auto _ : state) {
        benchmark::DoNotOptimize(adpipe::alpha_composite(scene, cut, box));
    }
    state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_AlphaComposite)->Arg(64)->Arg(128)->Arg(256);

void BM_SeamlessClone(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const adpipe::SceneImage scene = adpipe::SceneImage::create(256, 256, {120, 130, 140});
    const adpipe::CutoutObject cut =
        adpipe::resize_to_box(disc_cutout(64), {0, 0, double(size), double(size)});
    const adpipe::PlacementBox box{32, 32, 32.0 + size, 32.0 + size};
    for (auto _ : state) {
        benchmark::DoNotOptimize(adpipe::seamless_clone(scene, cut, box));
    }
}
BENCHMARK(BM_SeamlessClone)->Arg(8)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
