#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "adpipe/placement.hpp"

namespace {

std::vector<std::pair<adpipe::PlacementBox, adpipe::PlacementBox>> make_pairs(std::size_t n) {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> coord(0.0, 512.0);
    std::uniform_real_distribution<double> extent(1.0, 256.0);
    std::vector<std::pair<adpipe::PlacementBox, adpipe::PlacementBox>> pairs;
    pairs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ax = coord(rng), ay = coord(rng);
        const double bx = coord(rng), by = coord(rng);
        pairs.push_back({{ax, ay, ax + extent(rng), ay + extent(rng)},
                         {bx, by, bx + extent(rng), by + extent(rng)}});
    }
    return pairs;
}

void BM_Iou(benchmark::State& state) {
    const auto pairs = make_pairs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        double sum = 0.0;
        for (const auto& [a, b] : pairs) {
            sum += adpipe::iou(a, b);
        }
        benchmark::DoNotOptimize(sum);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Iou)->Range(64, 4096);

void BM_CollisionScore(benchmark::State& state) {
    adpipe::SceneImage scene = adpipe::SceneImage::create(512, 512);
    adpipe::ObjectMask object;
    object.mask = adpipe::BinaryMask::filled(512, 512, false);
    for (int y = 100; y < 300; ++y)
        for (int x = 100; x < 300; ++x) object.mask.set(x, y, true);
    scene.object_masks.push_back(object);
    const adpipe::PlacementBox box{150, 150, 400, 400};
    for (auto _ : state) {
        benchmark::DoNotOptimize(adpipe::collision_score(box, scene));
    }
}
BENCHMARK(BM_CollisionScore);

}  // namespace
