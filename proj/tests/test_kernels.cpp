#include "act/kernels.hpp"

#include <gtest/gtest.h>
#include <omp.h>

#include <random>
#include <vector>

using namespace act;
namespace ks = act::kernels::serial;
namespace kp = act::kernels::parallel;

namespace {

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(r, c);
  for (auto& x : m.reshaped()) x = g(rng);
  return m;
}

kernels::PlsaData random_counts(std::mt19937_64& rng, Eigen::Index terms, Eigen::Index tracks) {
  std::vector<Eigen::Triplet<double>> cells;
  std::uniform_real_distribution<double> w(0.5, 30.0);
  for (Eigen::Index j = 0; j < tracks; ++j)
    for (Eigen::Index i = 0; i < terms; ++i)
      if (rng() % 5 == 0 || i == j % terms) cells.emplace_back(i, j, w(rng));
  kernels::ColSparse m(terms, tracks);
  m.setFromTriplets(cells.begin(), cells.end());
  return kernels::PlsaData(std::move(m));
}

Eigen::MatrixXd stochastic(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  Eigen::MatrixXd m(r, c);
  for (auto& x : m.reshaped()) x = u(rng);
  return m.array().rowwise() / m.colwise().sum().array();
}

class KernelThreads : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override {
    saved_ = omp_get_max_threads();
    omp_set_num_threads(GetParam());
  }
  void TearDown() override { omp_set_num_threads(saved_); }

 private:
  int saved_ = 1;
};

}  // namespace

TEST_P(KernelThreads, PairwiseDistances) {
  std::mt19937_64 rng(1);
  auto p = random_matrix(rng, 73, 5);
  auto a = ks::pairwise_distances(p), b = kp::pairwise_distances(p);
  EXPECT_TRUE(a == b);
  EXPECT_TRUE(a == a.transpose());
  EXPECT_NEAR(a(3, 10), (p.row(3) - p.row(10)).norm(), 1e-12);
}

TEST_P(KernelThreads, CosineDissimilarity) {
  std::mt19937_64 rng(2);
  auto p = random_matrix(rng, 41, 9);
  auto a = ks::cosine_dissimilarity(p), b = kp::cosine_dissimilarity(p);
  EXPECT_TRUE(a == b);
  EXPECT_NEAR(a(1, 2), 1.0 - p.row(1).dot(p.row(2)) / (p.row(1).norm() * p.row(2).norm()), 1e-12);
  EXPECT_TRUE((a.diagonal().array() == 0.0).all());
}

TEST_P(KernelThreads, NearestDistances) {
  std::mt19937_64 rng(3);
  auto pts = random_matrix(rng, 200, 3), q = random_matrix(rng, 20, 3);
  std::vector<Eigen::Index> none, self;
  EXPECT_TRUE(ks::nearest_distances(q, pts, none) == kp::nearest_distances(q, pts, none));

  auto sub = pts.topRows(20).eval();
  for (Eigen::Index i = 0; i < 20; ++i) self.push_back(i);
  auto a = ks::nearest_distances(sub, pts, self), b = kp::nearest_distances(sub, pts, self);
  EXPECT_TRUE(a == b);
  for (Eigen::Index i = 0; i < 20; ++i) {
    double best = 1e300;
    for (Eigen::Index j = 0; j < 200; ++j)
      if (j != i) best = std::min(best, (pts.row(i) - pts.row(j)).norm());
    EXPECT_NEAR(a(i), best, 1e-12);
  }
}

TEST_P(KernelThreads, GuttmanTransform) {
  std::mt19937_64 rng(4);
  auto x = random_matrix(rng, 30, 3);
  auto d = ks::pairwise_distances(x);
  Eigen::MatrixXd dh = d * 1.1;
  EXPECT_TRUE(ks::guttman_transform(x, d, dh) == kp::guttman_transform(x, d, dh));
}

TEST_P(KernelThreads, PlsaEStep) {
  std::mt19937_64 rng(5);
  auto data = random_counts(rng, 25, 120);
  auto pwz = stochastic(rng, 25, 4), pzt = stochastic(rng, 4, 120);
  Eigen::VectorXd pt = Eigen::VectorXd::Constant(120, 1.0 / 120.0);
  Eigen::MatrixXd aw, az, bw, bz;
  ks::plsa_expected_counts(data, pwz, pzt, aw, az);
  kp::plsa_expected_counts(data, pwz, pzt, bw, bz);
  EXPECT_TRUE(aw == bw);
  EXPECT_TRUE(az == bz);
  EXPECT_EQ(ks::plsa_log_likelihood(data, pwz, pzt, pt), kp::plsa_log_likelihood(data, pwz, pzt, pt));

  // Expected counts preserve the total mass of the data.
  EXPECT_NEAR(aw.sum(), data.by_track.sum(), 1e-9 * data.by_track.sum());
  EXPECT_NEAR(az.sum(), data.by_track.sum(), 1e-9 * data.by_track.sum());
}

INSTANTIATE_TEST_SUITE_P(Threads, KernelThreads, ::testing::Values(1, 2, 4, 7));
