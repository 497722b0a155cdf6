// asynchbf - cooperative leakage beamforming for underlay spectrum sharing
// Copyright (C) 2026 The asynchbf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <benchmark/benchmark.h>

#include "asynchbf/beamforming.hpp"
#include "asynchbf/channel.hpp"
#include "asynchbf/geometry.hpp"
#include "asynchbf/power_allocation.hpp"
#include "asynchbf/rng.hpp"
#include "asynchbf/selection.hpp"
#include "asynchbf/simulation.hpp"

using namespace asynchbf;

namespace
{
    struct Scene
    {
        Topology topo;
        CorrelationSet corr;
        ChannelRealization ch;
        CovarianceBundle cov;
        VecR gamma_th;
        VecR weights;
    };

    Scene make_scene(std::uint64_t seed)
    {
        Scene s;
        s.topo.ccrn_positions = {{-1.934, 6.208}, {106.651, 61.995}, {70.870, -99.645},
                                 {-49.368, 99.908}};
        s.topo.sd_positions = {{1090.343, 9.789}, {1102.343, -8.211}, {1111.343, 3.789}};
        s.topo.pr_positions = {{-231.217, 143.572}, {-175.346, -171.828}};
        s.corr = compute_correlations(compute_delays(s.topo), 0, 2.0e-6);
        VecR sigma2(3);
        sigma2 << 1.1e-16, 1.01e-16, (1.0 + std::pow(10.0, -1.5)) * 1.0e-16;
        s.ch = draw_channels(s.topo, FadingSpec{}, 1.0e4, sigma2, seed);
        s.cov = build_covariances(s.ch, s.corr);
        s.gamma_th.resize(2);
        s.gamma_th << 1.0e-16, 2.5e-16;
        s.weights = VecR::Ones(3);
        return s;
    }
} // namespace

static void BM_BuildCovariances(benchmark::State &state)
{
    Scene s = make_scene(11);
    for (auto _ : state)
    {
        CovarianceBundle cov = build_covariances(s.ch, s.corr);
        benchmark::DoNotOptimize(cov);
    }
}
BENCHMARK(BM_BuildCovariances);

static void BM_LeakageDirections(benchmark::State &state)
{
    Scene s = make_scene(12);
    for (auto _ : state)
    {
        BeamDirections dirs = lbf_directions(s.cov, s.ch);
        benchmark::DoNotOptimize(dirs);
    }
}
BENCHMARK(BM_LeakageDirections);

static void BM_OptimalAllocation(benchmark::State &state)
{
    Scene s = make_scene(13);
    BeamDirections dirs = lbf_directions(s.cov, s.ch);
    AllocationProblem prob = make_allocation_problem(s.ch, s.cov, dirs, s.gamma_th, s.weights);
    for (auto _ : state)
    {
        Allocation alloc = opa_allocate(prob);
        benchmark::DoNotOptimize(alloc);
    }
}
BENCHMARK(BM_OptimalAllocation);

static void BM_FullTrial(benchmark::State &state)
{
    Scene s = make_scene(14);
    VecR sigma2(3);
    sigma2 << 1.1e-16, 1.01e-16, (1.0 + std::pow(10.0, -1.5)) * 1.0e-16;
    std::uint64_t t = 0;
    for (auto _ : state)
    {
        ChannelRealization ch =
            draw_channels(s.topo, FadingSpec{}, 1.0e4, sigma2, derive_seed(99, t++));
        CovarianceBundle cov = build_covariances(ch, s.corr);
        BeamDirections dirs = lbf_directions(cov, ch);
        AllocationProblem prob = make_allocation_problem(ch, cov, dirs, s.gamma_th, s.weights);
        Allocation alloc = opa_allocate(prob);
        BeamformerSolution sol;
        sol.directions = dirs;
        sol.alpha = alloc.alpha;
        TrialMetrics metrics = evaluate_solution(ch, cov, sol, s.gamma_th, s.weights);
        benchmark::DoNotOptimize(metrics);
    }
}
BENCHMARK(BM_FullTrial);

static void BM_SelectionTrial(benchmark::State &state)
{
    Scene s = make_scene(15);
    for (auto _ : state)
    {
        SelectionResult res = select_and_beamform(s.ch, s.cov, s.gamma_th, s.weights);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(BM_SelectionTrial);

BENCHMARK_MAIN();
