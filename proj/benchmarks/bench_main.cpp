#include <benchmark/benchmark.h>

#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include "ecoop/mac.hpp"
#include "ecoop/relay.hpp"
#include "ecoop/twoway.hpp"
#include "ecoop/types.hpp"
#include "ecoop/waterfill.hpp"

namespace {

std::vector<double> random_caps(std::size_t t, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<double> caps(t);
  double run = 0.0;
  for (auto& c : caps) {
    run += u(rng);
    c = run;
  }
  return caps;
}

ecoop::EnergyProfile random_profile(std::size_t t, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<double> e(t);
  for (auto& x : e) x = u(rng);
  return ecoop::EnergyProfile(e);
}

void BM_SingleUserDwf(benchmark::State& state) {
  const auto t = static_cast<std::size_t>(state.range(0));
  const std::vector<double> caps = random_caps(t, 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ecoop::single_user_dwf(caps));
  }
  state.SetComplexityN(state.range(0));
}

void BM_ProjectCumulative(benchmark::State& state) {
  const auto t = static_cast<std::size_t>(state.range(0));
  const std::vector<double> caps = random_caps(t, 19);
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-5.0, 15.0);
  std::vector<double> v(t);
  for (auto& x : v) x = u(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ecoop::project_cumulative(v, caps));
  }
  state.SetComplexityN(state.range(0));
}

void BM_TwoDimDwf(benchmark::State& state) {
  const auto t = static_cast<std::size_t>(state.range(0));
  const ecoop::EnergyProfile e1 = random_profile(t, 29);
  const ecoop::EnergyProfile e2 = random_profile(t, 31);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ecoop::two_dim_dwf(e1, e2, 0.7, 1.0, 1.0));
  }
  state.SetComplexityN(state.range(0));
}

void BM_SolveRelaySourceInitial(benchmark::State& state) {
  ecoop::Scenario s{ecoop::Model::Relay, ecoop::EnergyProfile{{12, 0, 0, 0}},
                    ecoop::EnergyProfile{{5, 1, 0, 2}}, 0.5, {}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ecoop::solve_relay(s));
  }
}

void BM_SolveRelaySingleCrossing(benchmark::State& state) {
  ecoop::Scenario s{ecoop::Model::Relay, ecoop::EnergyProfile{{2, 3, 5, 4}},
                    ecoop::EnergyProfile{{5, 1, 2, 1}}, 0.5, {}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ecoop::solve_relay(s));
  }
}

void BM_SolveRelayGeneral(benchmark::State& state) {
  // Double-crossing arrivals force the certified general path.
  ecoop::Scenario s{ecoop::Model::Relay, ecoop::EnergyProfile{{0, 5, 0, 5}},
                    ecoop::EnergyProfile{{3, 0, 5, 0}}, 0.6, {}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ecoop::solve_relay(s));
  }
}

void BM_SolveMacNoTransfer(benchmark::State& state) {
  ecoop::Scenario s{ecoop::Model::Mac, ecoop::EnergyProfile{{5, 2, 5}},
                    ecoop::EnergyProfile{{1, 3, 1}}, 0.5, {}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ecoop::solve_mac_weighted(s, {2.0, 1.0}));
  }
}

void BM_SolveMacFullTransfer(benchmark::State& state) {
  ecoop::Scenario s{ecoop::Model::Mac, ecoop::EnergyProfile{{5, 2, 5}},
                    ecoop::EnergyProfile{{1, 3, 1}}, 0.5, {}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ecoop::solve_mac_weighted(s, {1.0, 3.0}));
  }
}

void BM_SolveMacGeneral(benchmark::State& state) {
  ecoop::Scenario s{ecoop::Model::Mac, ecoop::EnergyProfile{{5, 2, 5}},
                    ecoop::EnergyProfile{{1, 3, 1}}, 0.5, {}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ecoop::solve_mac_weighted(s, {1.0, 1.5}));
  }
}

}  // namespace

BENCHMARK(BM_SingleUserDwf)->RangeMultiplier(4)->Range(4, 1024)->Complexity();
BENCHMARK(BM_ProjectCumulative)->RangeMultiplier(4)->Range(4, 256)->Complexity();
BENCHMARK(BM_TwoDimDwf)->RangeMultiplier(2)->Range(2, 64)->Complexity();
BENCHMARK(BM_SolveRelaySourceInitial);
BENCHMARK(BM_SolveRelaySingleCrossing);
BENCHMARK(BM_SolveRelayGeneral);
BENCHMARK(BM_SolveMacNoTransfer);
BENCHMARK(BM_SolveMacFullTransfer);
BENCHMARK(BM_SolveMacGeneral);

BENCHMARK_MAIN();
