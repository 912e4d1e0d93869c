// Copyright 2026 The kerrchaos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "kerrchaos/classical.hpp"
#include "kerrchaos/master.hpp"
#include "kerrchaos/model.hpp"
#include "kerrchaos/noise.hpp"
#include "kerrchaos/qsd.hpp"
#include "kerrchaos/wigner.hpp"

using namespace kerrchaos;

namespace {

ModelParams kerr_set() {
    ModelParams p;
    p.delta = -1.0;
    p.chi0 = 0.3;
    p.f0 = 1.0;
    return p;
}

void qsd_step_bench(benchmark::State& state, StepScheme scheme) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    const ModelParams p = kerr_set();
    QsdStepper stepper(p, dim, 1e-4, scheme, true);
    FockVector psi = coherent_state({1.0, 0.5}, dim);
    const NoiseStream noise(1, 0);
    std::uint64_t k = 0;
    for (auto _ : state) {
        stepper.step(psi, double(k) * 1e-4, noise.increment(k, 0, 1e-4), {});
        ++k;
    }
    benchmark::DoNotOptimize(psi[0]);
}

void BM_QsdStepExponentialEuler(benchmark::State& s) { qsd_step_bench(s, StepScheme::exponential_euler); }
void BM_QsdStepStrangSplit(benchmark::State& s) { qsd_step_bench(s, StepScheme::strang_split); }
BENCHMARK(BM_QsdStepExponentialEuler)->Arg(32)->Arg(64)->Arg(160);
BENCHMARK(BM_QsdStepStrangSplit)->Arg(32)->Arg(64)->Arg(160);

void BM_NoiseIncrement(benchmark::State& state) {
    const NoiseStream noise(2024, 7);
    std::uint64_t k = 0;
    for (auto _ : state) benchmark::DoNotOptimize(noise.increment(k++, 0, 1e-3));
}
BENCHMARK(BM_NoiseIncrement);

void BM_LindbladRhs(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    const DensityMatrix rho = DensityMatrix::pure(coherent_state({1.0, 0.0}, dim));
    const ModelParams p = kerr_set();
    for (auto _ : state) benchmark::DoNotOptimize(lindblad_rhs(rho, 0.0, p));
}
BENCHMARK(BM_LindbladRhs)->Arg(30)->Arg(60);

void BM_WignerGrid(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    const DensityMatrix rho = DensityMatrix::pure(coherent_state({2.0, -1.0}, dim));
    const GridSpec spec = default_grid(dim);
    for (auto _ : state) benchmark::DoNotOptimize(wigner_from_density(rho, spec));
}
BENCHMARK(BM_WignerGrid)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);

void BM_ClassicalPeriod(benchmark::State& state) {
    ModelParams p;
    p.delta = -15.0;
    p.chi0 = 2.0;
    p.f0 = 5.8;
    p.f1 = 4.9;
    p.small_delta = 2.0;
    p.f_mod = DriveModulation::complex_exponential;
    const double h = aligned_step(3.14159265358979323846, 1e-3);
    Complex a{0.1, 0.0};
    double t = 0.0;
    for (auto _ : state) {
        for (int k = 0; k < 3142; ++k, t += h) a = rk4_step(a, t, h, p);
        benchmark::DoNotOptimize(a);
    }
}
BENCHMARK(BM_ClassicalPeriod);

}  // namespace

BENCHMARK_MAIN();
