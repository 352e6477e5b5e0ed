#include <benchmark/benchmark.h>
#include <omp.h>

#include <cstdint>
#include <numbers>
#include <vector>

#include "shellvib/assembly.hpp"

namespace {

using namespace shellvib;

ShellModel sphere(int level) {
  return ShellModel{.mesh = build_patches(generate_benchmark_mesh(SphereSpec{0.1135, level})),
                    .thickness = 1.5875e-3,
                    .material = MaterialSpec::isotropic(193.05e9, 0.28, 8025.937)};
}

ShellModel piezo_roof(int n) {
  return ShellModel{.mesh = build_patches(
                        generate_benchmark_mesh(RoofSpec{0.5, 0.25, 40.0 * std::numbers::pi / 180.0, n})),
                    .thickness = 2.5e-3,
                    .material = MaterialSpec::batio3(),
                    .electric = {ElectricCondition::Unelectroded, 0.0}};
}

void BM_SphereSerial(benchmark::State& state) {
  const ShellModel m = sphere(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_system_serial(m));
  state.counters["elements"] = static_cast<double>(m.mesh.patches.size());
}

void BM_SphereOpenMP(benchmark::State& state) {
  const ShellModel m = sphere(static_cast<int>(state.range(0)));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_system(m));
  state.counters["elements"] = static_cast<double>(m.mesh.patches.size());
  state.counters["threads"] = static_cast<double>(state.range(1));
}

void BM_PiezoRoofSerial(benchmark::State& state) {
  const ShellModel m = piezo_roof(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_system_serial(m));
}

void BM_PiezoRoofOpenMP(benchmark::State& state) {
  const ShellModel m = piezo_roof(static_cast<int>(state.range(0)));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_system(m));
  state.counters["threads"] = static_cast<double>(state.range(1));
}

std::vector<int64_t> thread_counts() {
  std::vector<int64_t> t{1, 2};
  const int procs = omp_get_num_procs();
  for (int n = 4; n <= procs; n *= 2) t.push_back(n);
  if (procs > 2 && t.back() != procs) t.push_back(procs);
  return t;
}

}  // namespace

BENCHMARK(BM_SphereSerial)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SphereOpenMP)->ArgsProduct({{4, 5}, thread_counts()})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PiezoRoofSerial)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PiezoRoofOpenMP)->ArgsProduct({{32}, thread_counts()})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
