#include <benchmark/benchmark.h>

#include "pictk/comparison.hpp"
#include "pictk/curvature.hpp"
#include "pictk/exterior.hpp"
#include "pictk/grid.hpp"
#include "pictk/hodge.hpp"
#include "pictk/potentials.hpp"
#include "pictk/sampling.hpp"

using namespace pictk;

static void BM_Wedge(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng = make_rng(1);
  const FormElement a = random_form(rng, n), b = random_form(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(wedge(a, b));
}
BENCHMARK(BM_Wedge)->DenseRange(4, 8, 2);

static void BM_CliffordC(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng = make_rng(2);
  const FormElement a = random_form(rng, n);
  const Vector v = random_vector(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(clifford_c(v, a));
}
BENCHMARK(BM_CliffordC)->DenseRange(4, 8, 2);

static void BM_WeitzenboeckMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng = make_rng(3);
  const CurvTensor R = random_curvature(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(weitzenboeck_on_two_forms(R));
}
BENCHMARK(BM_WeitzenboeckMatrix)->Arg(4)->Arg(6)->Arg(8);

static void BM_WeitzenboeckCliffordTrace(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng = make_rng(4);
  const CurvTensor R = random_curvature(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(weitzenboeck_clifford_matrix(R));
}
BENCHMARK(BM_WeitzenboeckCliffordTrace)->Arg(4)->Arg(6);

static void BM_MinIsotropic(benchmark::State& state) {
  SearchConfig cfg;
  cfg.restarts = static_cast<int>(state.range(0));
  cfg.threads = 1;
  const CurvTensor R = sphere_product_tensor(3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(min_isotropic(R, cfg));
}
BENCHMARK(BM_MinIsotropic)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_RiccatiOracle(benchmark::State& state) {
  const auto model = RotSymModel::constant_curvature(static_cast<int>(state.range(0)), 1.0, -0.5);
  for (auto _ : state) benchmark::DoNotOptimize(riccati_oracle(model, 1.0));
}
BENCHMARK(BM_RiccatiOracle)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_FocalInequality(benchmark::State& state) {
  const FocalParams p = FocalParams::make(4, 1.0, 5.0, 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(verify_focal_inequality(p, 18.01, Orientation::N));
}
BENCHMARK(BM_FocalInequality)->Unit(benchmark::kMillisecond);

static void BM_GridLaplacian(benchmark::State& state) {
  const int Nr = static_cast<int>(state.range(0));
  const FlatBandGrid g = FlatBandGrid::make(4, 1.0, Nr, std::vector<int>{Nr, Nr, 1}, 1.0);
  const FormField F = sample(g, FieldSpec::random(4, 1.0, -1, 8, {true, true, false}, 5));
  for (auto _ : state) benchmark::DoNotOptimize(laplacian_grid(F));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.nodes()));
}
BENCHMARK(BM_GridLaplacian)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_HarmonicDimension(benchmark::State& state) {
  const SimplicialComplex K =
      SimplicialComplex::load(std::string(PICTK_COMPLEX_DIR) + "/torus.json");
  Rng rng = make_rng(6);
  std::vector<double> f(static_cast<std::size_t>(K.vertices()));
  for (double& v : f) v = uniform(rng, -5.0, 5.0);
  const TwistedComplex T = TwistedComplex::make(K, f, BoundaryCondition::Absolute);
  for (auto _ : state) benchmark::DoNotOptimize(harmonic_dimension(T, 1, Mass::Weighted));
}
BENCHMARK(BM_HarmonicDimension)->Unit(benchmark::kMillisecond);

static void BM_ExactRank(benchmark::State& state) {
  const SimplicialComplex K =
      SimplicialComplex::load(std::string(PICTK_COMPLEX_DIR) + "/solid_torus.json");
  const Eigen::MatrixXi d = K.coboundary(1);
  for (auto _ : state) benchmark::DoNotOptimize(exact_rank(d));
}
BENCHMARK(BM_ExactRank)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
