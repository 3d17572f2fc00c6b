#include <hybridvi/geometry.hpp>
#include <hybridvi/problems.hpp>
#include <hybridvi/rng.hpp>
#include <hybridvi/solvers.hpp>

#include <benchmark/benchmark.h>

#include <vector>

using namespace vi;

namespace {

std::vector<Vector> sample_points(int dim, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vector> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) pts.push_back(3.0 * rng.normal_vector(dim));
  return pts;
}

void BM_project_scaled_simplex(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto pts = sample_points(dim, 64, 11);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_scaled_simplex(pts[i++ % pts.size()], 1.5));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_project_scaled_simplex)->Arg(10)->Arg(100)->Arg(1000);

void BM_project_two_halfspaces(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(12);
  const auto pts = sample_points(dim, 64, 13);
  Halfspace h1{rng.unit_sphere(dim), 0.3};
  Halfspace h2{rng.unit_sphere(dim), -0.1};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_two_halfspaces(pts[i++ % pts.size()], h1, h2));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_project_two_halfspaces)->Arg(5)->Arg(50);

void BM_project_polyhedron_cyclic(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(14);
  std::vector<Halfspace> faces;
  for (int i = 0; i < 2 * dim; ++i)
    faces.push_back({rng.unit_sphere(dim), rng.uniform(0.5, 2.0)});
  const auto pts = sample_points(dim, 64, 15);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_polyhedron_cyclic(pts[i++ % pts.size()], faces, 1e-10));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_project_polyhedron_cyclic)->Arg(5)->Arg(20);

void BM_solve_alg1_polytope(benchmark::State& state) {
  const ProblemInstance inst = gen_polytope_translation(5, 10, 1);
  SolverConfig cfg;
  cfg.lambda = 0.25;
  cfg.epsilon = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_alg1(inst, cfg));
  }
}
BENCHMARK(BM_solve_alg1_polytope)->Unit(benchmark::kMillisecond);

void BM_solve_hphard(benchmark::State& state) {
  const ProblemInstance inst = gen_hphard(10, 1);
  SolverConfig cfg;
  cfg.lambda = 0.25 / inst.L;
  cfg.epsilon = 0.01;
  const auto alg = static_cast<Algorithm>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(inst, alg, cfg));
  }
}
BENCHMARK(BM_solve_hphard)
    ->Arg(static_cast<int>(Algorithm::alg1))
    ->Arg(static_cast<int>(Algorithm::alg3))
    ->Arg(static_cast<int>(Algorithm::alg4))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
