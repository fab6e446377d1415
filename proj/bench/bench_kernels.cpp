// Parallel kernels against their serial references.

#include "pano/blend.hpp"
#include "pano/projection.hpp"
#include "synthetic.hpp"

#include <benchmark/benchmark.h>

using namespace pano;

namespace {

const FieldOfView kFov = FieldOfView::from_degrees(90, 75);
const EulerPose kPose(0.05, 0.2, 1.1);

const PerspectiveFrame& source()
{
    static const PerspectiveFrame f(testing::smooth_pattern(512, 384, 3));
    return f;
}

const EquirectFrame& panorama()
{
    static const EquirectFrame e(testing::scene_panorama(1024, 512, {}));
    return e;
}

const EquirectFrame& panorama_b()
{
    testing::SceneStyle s;
    s.seed = 2;
    static const EquirectFrame e(testing::scene_panorama(1024, 512, s));
    return e;
}

void BM_Project(benchmark::State& state)
{
    const int he = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(project_to_equirect(source(), kPose, kFov, he));
    }
    state.SetItemsProcessed(state.iterations() * 2LL * he * he);
}

void BM_ProjectReference(benchmark::State& state)
{
    const int he = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::project_to_equirect(source(), kPose, kFov, he));
    }
    state.SetItemsProcessed(state.iterations() * 2LL * he * he);
}

void BM_Unwrap(benchmark::State& state)
{
    const int w = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(unwrap_to_perspective(panorama(), kPose, kFov, w, w));
    }
    state.SetItemsProcessed(state.iterations() * w * w);
}

void BM_UnwrapReference(benchmark::State& state)
{
    const int w = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::unwrap_to_perspective(panorama(), kPose, kFov, w, w));
    }
    state.SetItemsProcessed(state.iterations() * w * w);
}

void BM_Blend(benchmark::State& state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(blend_pair(panorama(), panorama_b()));
    }
    state.SetItemsProcessed(state.iterations() * panorama().width() * panorama().height());
}

void BM_BlendReference(benchmark::State& state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::blend_pair(panorama(), panorama_b()));
    }
    state.SetItemsProcessed(state.iterations() * panorama().width() * panorama().height());
}

} // namespace

BENCHMARK(BM_Project)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProjectReference)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Unwrap)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UnwrapReference)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Blend)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BlendReference)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
