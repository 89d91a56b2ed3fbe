// Serial reference kernels against their OpenMP versions.
// Run with OMP_NUM_THREADS set to compare thread counts.

#include "act/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace ks = act::kernels::serial;
namespace kp = act::kernels::parallel;

namespace {

Eigen::MatrixXd points(Eigen::Index n, Eigen::Index d, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(n, d);
  for (auto& x : m.reshaped()) x = g(rng);
  return m;
}

act::kernels::PlsaData counts(Eigen::Index terms, Eigen::Index tracks) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> w(0.5, 30.0);
  std::vector<Eigen::Triplet<double>> cells;
  for (Eigen::Index j = 0; j < tracks; ++j)
    for (int c = 0; c < 6; ++c) cells.emplace_back(static_cast<Eigen::Index>(rng() % terms), j, w(rng));
  act::kernels::ColSparse m(terms, tracks);
  m.setFromTriplets(cells.begin(), cells.end(), [](double a, double) { return a; });
  return act::kernels::PlsaData(std::move(m));
}

Eigen::MatrixXd stochastic(Eigen::Index r, Eigen::Index c) {
  Eigen::MatrixXd m = points(r, c, 3).cwiseAbs().array() + 0.01;
  return m.array().rowwise() / m.colwise().sum().array();
}

template <Eigen::MatrixXd (*Fn)(const Eigen::MatrixXd&)>
void BM_Rows(benchmark::State& state) {
  const auto p = points(state.range(0), 16);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(p));
  state.SetComplexityN(state.range(0));
}

template <decltype(&ks::nearest_distances) Fn>
void BM_Nearest(benchmark::State& state) {
  const auto p = points(state.range(0), 3), q = points(state.range(0) / 10, 3, 5);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(q, p, {}));
}

template <decltype(&ks::guttman_transform) Fn>
void BM_Guttman(benchmark::State& state) {
  const auto x = points(state.range(0), 3);
  const auto d = ks::pairwise_distances(x);
  const Eigen::MatrixXd dh = d * 1.05;
  for (auto _ : state) benchmark::DoNotOptimize(Fn(x, d, dh));
}

template <decltype(&ks::plsa_expected_counts) Fn>
void BM_PlsaEStep(benchmark::State& state) {
  const auto data = counts(400, state.range(0));
  const auto pwz = stochastic(400, 32), pzt = stochastic(32, state.range(0));
  Eigen::MatrixXd aw, az;
  for (auto _ : state) {
    Fn(data, pwz, pzt, aw, az);
    benchmark::DoNotOptimize(aw.data());
  }
}

}  // namespace

BENCHMARK(BM_Rows<ks::pairwise_distances>)->Name("pairwise_distances/serial")->Arg(500)->Arg(2000);
BENCHMARK(BM_Rows<kp::pairwise_distances>)->Name("pairwise_distances/parallel")->Arg(500)->Arg(2000);
BENCHMARK(BM_Rows<ks::cosine_dissimilarity>)->Name("cosine_dissimilarity/serial")->Arg(500)->Arg(2000);
BENCHMARK(BM_Rows<kp::cosine_dissimilarity>)->Name("cosine_dissimilarity/parallel")->Arg(500)->Arg(2000);
BENCHMARK(BM_Nearest<ks::nearest_distances>)->Name("nearest_distances/serial")->Arg(4088);
BENCHMARK(BM_Nearest<kp::nearest_distances>)->Name("nearest_distances/parallel")->Arg(4088);
BENCHMARK(BM_Guttman<ks::guttman_transform>)->Name("guttman_transform/serial")->Arg(500)->Arg(1500);
BENCHMARK(BM_Guttman<kp::guttman_transform>)->Name("guttman_transform/parallel")->Arg(500)->Arg(1500);
BENCHMARK(BM_PlsaEStep<ks::plsa_expected_counts>)->Name("plsa_e_step/serial")->Arg(20000);
BENCHMARK(BM_PlsaEStep<kp::plsa_expected_counts>)->Name("plsa_e_step/parallel")->Arg(20000);

BENCHMARK_MAIN();
