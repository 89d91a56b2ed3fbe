#include "act/clusterability.hpp"
#include "act/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace act;

namespace {

Eigen::MatrixXd uniform_cube(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd p(n, d);
  for (auto& x : p.reshaped()) x = u(rng);
  return p;
}

Eigen::MatrixXd two_gaussians(std::mt19937_64& rng, Eigen::Index n, double separation) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd p(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < 3; ++c) p(i, c) = g(rng);
    // Offset along the diagonal; coordinate-wise bootstrap cannot see a gap
    // that shows in only one marginal.
    if (i % 2) p.row(i).array() += separation / std::sqrt(3.0);
  }
  return p;
}

/// Tracks with exactly two terms each; `same_group` picks both terms from
/// one of three term groups.
TermDocMatrix two_term_tracks(std::mt19937_64& rng, std::size_t terms, std::size_t tracks, bool same_group) {
  Eigen::MatrixXd n = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(terms), static_cast<Eigen::Index>(tracks));
  std::uniform_real_distribution<double> w(1.0, 5.0);
  const std::size_t group = terms / 3;
  for (std::size_t j = 0; j < tracks; ++j) {
    std::size_t a, b;
    do {
      if (same_group) {
        const std::size_t g = rng() % 3;
        a = g * group + rng() % group;
        b = g * group + rng() % group;
      } else {
        a = rng() % terms;
        b = rng() % terms;
      }
    } while (a == b);
    n(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j)) = w(rng);
    n(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(j)) = w(rng);
  }
  return TermDocMatrix::from_dense(n);
}

}  // namespace

TEST(Hopkins, Ratio) {
  EXPECT_EQ(hopkins_ratio(2.0, 2.0), 0.5);
  EXPECT_EQ(hopkins_ratio(0.0, 0.0), 0.5);
  EXPECT_EQ(hopkins_ratio(3.0, 0.0), 1.0);
  EXPECT_EQ(hopkins_ratio(1.0, 3.0), 0.25);
}

TEST(Hopkins, DefaultSample) {
  EXPECT_EQ(default_hopkins_sample(5), 1u);
  EXPECT_EQ(default_hopkins_sample(500), 50u);
  EXPECT_EQ(default_hopkins_sample(4088), 100u);
}

TEST(Hopkins, PerfectlyClusteredIsOne) {
  // Two stacks of identical points; mixing their coordinates lands away from both.
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(100, 2);
  p.bottomRows(50).setConstant(10.0);
  auto r = hopkins_index(p, 10, 5, 3);
  EXPECT_EQ(r.h, 1.0);
}

TEST(Hopkins, UniformNearHalf) {
  std::mt19937_64 rng(2024);
  auto r = hopkins_index(uniform_cube(rng, 500, 3), 50, 10, 1);
  EXPECT_GE(r.h, 0.45);
  EXPECT_LE(r.h, 0.55);
  ASSERT_EQ(r.per_run_values.size(), 10u);
  const double mean = std::accumulate(r.per_run_values.begin(), r.per_run_values.end(), 0.0) / 10.0;
  EXPECT_NEAR(r.h, mean, 1e-12);
  for (double v : r.per_run_values) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Hopkins, IncreasesWithSeparation) {
  double previous = 0.0;
  for (double sep : {0.0, 4.0, 10.0}) {
    std::mt19937_64 rng(99);
    auto r = hopkins_index(two_gaussians(rng, 500, sep), 50, 10, 5);
    EXPECT_GT(r.h, previous) << sep;
    previous = r.h;
  }
  EXPECT_GT(previous, 0.75);
}

TEST(Hopkins, InvariantUnderAxisAlignedSimilarities) {
  std::mt19937_64 rng(6);
  Eigen::MatrixXd p = two_gaussians(rng, 300, 5.0);
  const auto base = hopkins_index(p, 30, 4, 11);

  Eigen::MatrixXd shifted = (p.rowwise() + Eigen::RowVector3d(5.0, -2.0, 7.5)) * 3.0;
  Eigen::MatrixXd mirrored = p;
  mirrored.col(1) *= -1.0;
  for (const auto& q : {shifted, mirrored}) {
    const auto r = hopkins_index(q, 30, 4, 11);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(r.per_run_values[i], base.per_run_values[i], 1e-12);
  }
}

TEST(Hopkins, Errors) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Random(9, 2);
  try {
    hopkins_index(p, 5, 1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SampleSize);
  }
  EXPECT_NO_THROW(hopkins_index(Eigen::MatrixXd::Random(10, 2), 5, 1, 0));
  EXPECT_THROW(hopkins_index(p, 0, 1, 0), Error);
}

TEST(Hopkins, Deterministic) {
  std::mt19937_64 rng(4);
  Eigen::MatrixXd p = uniform_cube(rng, 200, 4);
  auto a = hopkins_index(p, 20, 6, 8), b = hopkins_index(p, 20, 6, 8);
  EXPECT_EQ(a.per_run_values, b.per_run_values);
  EXPECT_EQ(a.h, b.h);
}

TEST(Protocol, DefaultScheduleSize) {
  std::size_t total = 0;
  for (const auto& [terms, tracks] : default_schedule()) total += tracks;
  EXPECT_EQ(total, 4088u);
  EXPECT_EQ(default_schedule().front(), (std::pair<std::size_t, std::size_t>{2, 2048}));
  EXPECT_EQ(default_schedule().back(), (std::pair<std::size_t, std::size_t>{10, 8}));
}

TEST(Protocol, ClusteredVersusUniformTermSpace) {
  std::mt19937_64 rng(12);
  const std::size_t terms = 30;
  std::normal_distribution<double> g(0.0, 0.05);
  Eigen::MatrixXd clustered(terms, 3);
  for (std::size_t i = 0; i < terms; ++i)
    for (Eigen::Index c = 0; c < 3; ++c)
      clustered(static_cast<Eigen::Index>(i), c) = (c == static_cast<Eigen::Index>(i / 10) ? 5.0 : 0.0) + g(rng);

  auto grouped = two_term_tracks(rng, terms, 1500, true);
  auto r = clusterability_protocol(grouped, {{3, clustered}}, {{2, 1000}}, 10, 7);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_GT(r[0].h_mean, 0.75);
  EXPECT_EQ(r[0].runs, 10);

  auto mixed = two_term_tracks(rng, terms, 1500, false);
  auto uniform = uniform_cube(rng, static_cast<Eigen::Index>(terms), 3);
  auto u = clusterability_protocol(mixed, {{3, uniform}}, {{2, 1000}}, 10, 7);
  EXPECT_LT(u[0].h_mean, 0.7);
}

TEST(Protocol, SharedSampleAcrossConfigurations) {
  std::mt19937_64 rng(13);
  auto m = two_term_tracks(rng, 30, 400, false);
  auto coords = uniform_cube(rng, 30, 3);
  auto r = clusterability_protocol(m, {{3, coords}, {8, coords}}, {{2, 300}}, 3, 1);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].per_run_values, r[1].per_run_values);
}

TEST(Protocol, ScheduleErrorNamesBucket) {
  std::mt19937_64 rng(14);
  auto m = two_term_tracks(rng, 30, 100, false);
  auto coords = uniform_cube(rng, 30, 3);
  try {
    clusterability_protocol(m, {{3, coords}}, {{2, 50}, {3, 10}}, 1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Schedule);
    EXPECT_NE(std::string(e.what()).find("bucket of 3 terms"), std::string::npos);
  }
}
