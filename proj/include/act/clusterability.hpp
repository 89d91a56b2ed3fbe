#pragma once

#include "act/corpus.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace act {

struct HopkinsResult {
  double h = 0.5;  // mean of per_run_values
  double sd = 0.0;
  std::size_t num_real = 0;
  std::size_t num_artificial = 0;
  std::vector<double> per_run_values;
  std::uint64_t seed = 0;
};

/// sum(A) / (sum(A) + sum(R)); 0.5 when both sums vanish.
double hopkins_ratio(double artificial_sum, double real_sum);

/// Default sample size: min(n / 10, 100), at least 1.
std::size_t default_hopkins_sample(std::size_t n);

/// Hopkins' index with artificial points drawn coordinate-wise from the
/// empirical marginals of the real points.
HopkinsResult hopkins_index(const Eigen::MatrixXd& points, std::size_t sample_count, int runs,
                            std::uint64_t seed);

/// (terms per track, number of tracks) buckets.
using TermSchedule = std::vector<std::pair<std::size_t, std::size_t>>;

/// 2048, 1024, ..., 8 tracks for 2..10 terms.
TermSchedule default_schedule();

struct ProtocolResult {
  Eigen::Index k;
  double h_mean;
  double h_sd;
  int runs;
  std::vector<double> per_run_values;
};

/// For every run, samples tracks per bucket (tracks with exactly that many
/// terms), places them at the center of mass of their terms in each term
/// configuration and computes Hopkins' index on the pooled positions. The
/// same sample is shared across configurations within a run.
std::vector<ProtocolResult> clusterability_protocol(
    const TermDocMatrix& matrix, const std::map<Eigen::Index, Eigen::MatrixXd>& term_coords_by_k,
    const TermSchedule& schedule, int runs, std::uint64_t seed);

}  // namespace act
