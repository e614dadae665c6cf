// Copyright 2026 The mieflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "mieflow/gaussian.hpp"
#include "mieflow/lattice.hpp"
#include "mieflow/mera.hpp"
#include "mieflow/singlet.hpp"
#include "mieflow/stabilizer.hpp"

using namespace mieflow;

namespace {

void BM_GaussianTrajectory(benchmark::State& st) {
  const int length = static_cast<int>(st.range(0));
  const auto state = lattice::xx_chain_state(length, 0.5);
  const int l = length / 32;
  const auto regions = lattice::interval_regions(length, 0, l - 1, length / 2, length / 2 + l - 1);
  const gaussian::TrajectorySampler sampler(state, regions.m, regions.ab());
  RngStream rng(1, 0);
  for (auto _ : st) benchmark::DoNotOptimize(sampler.sample(rng));
}
BENCHMARK(BM_GaussianTrajectory)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_SdrgSample(benchmark::State& st) {
  const int length = static_cast<int>(st.range(0));
  RngStream rng(2, 0);
  for (auto _ : st) benchmark::DoNotOptimize(singlet::sdrg_sample(length, rng));
}
BENCHMARK(BM_SdrgSample)->Arg(1024)->Arg(8192)->Unit(benchmark::kMicrosecond);

void BM_BellRewiring(benchmark::State& st) {
  const int length = 1024;
  RngStream rng(3, 0);
  const auto config = singlet::sdrg_sample(length, rng);
  const auto regions = lattice::interval_regions(length, 0, 1, 66, 67);
  const auto pairing = singlet::nearest_neighbor_pairing(length, regions.m, singlet::Boundary::periodic);
  for (auto _ : st) benchmark::DoNotOptimize(singlet::mie_mii_bell(config, regions, pairing));
}
BENCHMARK(BM_BellRewiring)->Unit(benchmark::kMicrosecond);

void BM_MeraMinCut(benchmark::State& st) {
  const int length = static_cast<int>(st.range(0));
  const auto g = mera::build_mera(length);
  std::vector<mera::Leg> legs(static_cast<std::size_t>(length), mera::Leg::free);
  for (int i = 0; i < length / 8; ++i) {
    legs[i] = mera::Leg::down;
    legs[length / 2 + i] = mera::Leg::up;
  }
  for (auto _ : st) benchmark::DoNotOptimize(mera::min_cut(g, legs));
}
BENCHMARK(BM_MeraMinCut)->Arg(64)->Arg(1024)->Unit(benchmark::kMicrosecond);

void BM_ToricTrajectory(benchmark::State& st) {
  const stab::TorusLattice lat{static_cast<int>(st.range(0)), static_cast<int>(st.range(0))};
  const auto ground = stab::toric_ground(lat, 2, stab::GroundStateLabel::string_net(0, 0));
  const auto regions = stab::annulus_regions(lat, stab::cell_rows(0, 1), stab::cell_rows(lat.l2 / 2, 1));
  RngStream rng(4, 0);
  for (auto _ : st) benchmark::DoNotOptimize(stab::mie_trajectory(ground, regions, stab::Basis::x, rng));
}
BENCHMARK(BM_ToricTrajectory)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
