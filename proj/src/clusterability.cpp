#include "act/clusterability.hpp"

#include "act/error.hpp"
#include "act/kernels.hpp"
#include "act/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace act {

namespace {

struct MeanSd {
  double mean;
  double sd;
};

// Sorted before summing so the result does not depend on run order.
MeanSd mean_sd(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0};
}

double hopkins_run(const Eigen::MatrixXd& points, std::size_t m, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(points.rows());
  const Eigen::Index d = points.cols();
  Rng rng(seed);

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::vector<Eigen::Index> sampled(m);
  std::sample(order.begin(), order.end(), sampled.begin(), static_cast<std::ptrdiff_t>(m), rng);

  Eigen::MatrixXd real(static_cast<Eigen::Index>(m), d);
  for (std::size_t s = 0; s < m; ++s) real.row(static_cast<Eigen::Index>(s)) = points.row(sampled[s]);

  std::uniform_int_distribution<Eigen::Index> pick(0, static_cast<Eigen::Index>(n) - 1);
  Eigen::MatrixXd artificial(static_cast<Eigen::Index>(m), d);
  for (Eigen::Index s = 0; s < artificial.rows(); ++s)
    for (Eigen::Index c = 0; c < d; ++c) artificial(s, c) = points(pick(rng), c);

  const Eigen::VectorXd r = kernels::parallel::nearest_distances(real, points, sampled);
  const Eigen::VectorXd a = kernels::parallel::nearest_distances(artificial, points, {});
  return hopkins_ratio(a.sum(), r.sum());
}

}  // namespace

double hopkins_ratio(double artificial_sum, double real_sum) {
  const double total = artificial_sum + real_sum;
  return total > 0.0 ? artificial_sum / total : 0.5;
}

std::size_t default_hopkins_sample(std::size_t n) {
  return std::max<std::size_t>(1, std::min<std::size_t>(n / 10, 100));
}

HopkinsResult hopkins_index(const Eigen::MatrixXd& points, std::size_t sample_count, int runs,
                            std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (points.cols() < 1) throw Error(ErrorCode::Parameter, "hopkins: points need at least one dimension");
  if (sample_count < 1) throw Error(ErrorCode::Parameter, "hopkins: sample count must be at least 1");
  if (runs < 1) throw Error(ErrorCode::Parameter, "hopkins: runs must be at least 1");
  if (n < 2 * sample_count)
    throw Error(ErrorCode::SampleSize, "hopkins: " + std::to_string(n) + " points cannot supply a sample of " +
                                           std::to_string(sample_count) + " (need n >= 2m)");

  HopkinsResult out;
  out.num_real = sample_count;
  out.num_artificial = sample_count;
  out.seed = seed;
  out.per_run_values.resize(static_cast<std::size_t>(runs));
  for (int r = 0; r < runs; ++r)
    out.per_run_values[static_cast<std::size_t>(r)] =
        hopkins_run(points, sample_count, derive_seed(seed, static_cast<std::uint64_t>(r)));
  const auto stats = mean_sd(out.per_run_values);
  out.h = stats.mean;
  out.sd = stats.sd;
  return out;
}

TermSchedule default_schedule() {
  TermSchedule schedule;
  std::size_t tracks = 2048;
  for (std::size_t terms = 2; terms <= 10; ++terms, tracks /= 2) schedule.emplace_back(terms, tracks);
  return schedule;
}

std::vector<ProtocolResult> clusterability_protocol(
    const TermDocMatrix& matrix, const std::map<Eigen::Index, Eigen::MatrixXd>& term_coords_by_k,
    const TermSchedule& schedule, int runs, std::uint64_t seed) {
  if (runs < 1) throw Error(ErrorCode::Parameter, "protocol: runs must be at least 1");
  if (schedule.empty()) throw Error(ErrorCode::Schedule, "protocol: empty schedule");
  for (const auto& [k, coords] : term_coords_by_k)
    if (static_cast<std::size_t>(coords.rows()) != matrix.num_terms())
      throw Error(ErrorCode::Parameter, "protocol: configuration for k=" + std::to_string(k) +
                                            " does not cover the matrix terms");

  // Tracks grouped by their exact number of terms.
  std::map<std::size_t, std::vector<std::size_t>> by_count;
  const auto& cells = matrix.cells();
  for (Eigen::Index j = 0; j < cells.outerSize(); ++j) {
    std::size_t nnz = 0;
    for (TermDocMatrix::Sparse::InnerIterator it(cells, j); it; ++it) ++nnz;
    by_count[nnz].push_back(static_cast<std::size_t>(j));
  }
  for (const auto& [terms, tracks] : schedule) {
    if (terms < 1) throw Error(ErrorCode::Schedule, "protocol: buckets need at least one term");
    const auto have = by_count.count(terms) ? by_count[terms].size() : 0;
    if (have < tracks)
      throw Error(ErrorCode::Schedule, "protocol: bucket of " + std::to_string(terms) + " terms needs " +
                                           std::to_string(tracks) + " tracks, corpus has " +
                                           std::to_string(have));
  }

  std::map<Eigen::Index, std::vector<double>> values;
  for (int r = 0; r < runs; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    std::vector<std::size_t> chosen;
    for (const auto& [terms, tracks] : schedule) {
      const auto& pool = by_count[terms];
      std::sample(pool.begin(), pool.end(), std::back_inserter(chosen), static_cast<std::ptrdiff_t>(tracks), rng);
    }
    const std::uint64_t hopkins_seed = rng();

    for (const auto& [k, coords] : term_coords_by_k) {
      Eigen::MatrixXd positions(static_cast<Eigen::Index>(chosen.size()), coords.cols());
      for (std::size_t t = 0; t < chosen.size(); ++t) {
        Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(coords.cols());
        double mass = 0.0;
        for (TermDocMatrix::Sparse::InnerIterator it(cells, static_cast<Eigen::Index>(chosen[t])); it; ++it) {
          acc += it.value() * coords.row(it.row());
          mass += it.value();
        }
        positions.row(static_cast<Eigen::Index>(t)) = acc / mass;
      }
      const auto m = default_hopkins_sample(chosen.size());
      values[k].push_back(hopkins_index(positions, m, 1, hopkins_seed).h);
    }
  }

  std::vector<ProtocolResult> out;
  for (auto& [k, per_run] : values) {
    const auto stats = mean_sd(per_run);
    out.push_back({k, stats.mean, stats.sd, runs, per_run});
  }
  return out;
}

}  // namespace act
