#include "act/error.hpp"
#include "act/kernels.hpp"
#include "act/moodspace.hpp"
#include "act/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace act {

namespace {

struct Pair {
  Eigen::Index a;
  Eigen::Index b;
};

void validate_dissimilarities(const Eigen::MatrixXd& d) {
  if (d.rows() != d.cols()) throw Error(ErrorCode::Parameter, "dissimilarity matrix must be square");
  if (!d.allFinite()) throw Error(ErrorCode::Parameter, "dissimilarities must be finite");
  const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    if (d(i, i) != 0.0) throw Error(ErrorCode::Parameter, "dissimilarity diagonal must be zero");
    for (Eigen::Index j = 0; j < i; ++j) {
      if (d(i, j) < 0.0) throw Error(ErrorCode::Parameter, "dissimilarities must be non-negative");
      if (std::abs(d(i, j) - d(j, i)) > 1e-12 * scale)
        throw Error(ErrorCode::Parameter, "dissimilarity matrix must be symmetric");
    }
  }
}

Eigen::MatrixXd random_configuration(Eigen::Index n, int dims, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd x(n, dims);
  for (Eigen::Index c = 0; c < dims; ++c)
    for (Eigen::Index r = 0; r < n; ++r) x(r, c) = normal(rng);
  return x;
}

struct RunResult {
  Eigen::MatrixXd coords;
  double stress1;
  std::vector<double> trace;
};

RunResult run_smacof(const Eigen::MatrixXd& dissimilarities, Eigen::MatrixXd config, const MdsOptions& opts) {
  Eigen::MatrixXd distances = kernels::parallel::pairwise_distances(config);
  Eigen::MatrixXd disparities = monotone_disparities(dissimilarities, distances);
  double stress = kruskal_stress1(distances, disparities);
  std::vector<double> trace{stress};

  for (int iter = 0; iter < opts.max_iter && stress > 1e-14; ++iter) {
    Eigen::MatrixXd next = kernels::parallel::guttman_transform(config, distances, disparities);
    Eigen::MatrixXd next_distances = kernels::parallel::pairwise_distances(next);
    Eigen::MatrixXd next_disparities = monotone_disparities(dissimilarities, next_distances);
    const double next_stress = kruskal_stress1(next_distances, next_disparities);
    // A step that does not lower Stress-1 ends the run at the previous configuration.
    if (!(next_stress <= stress)) break;

    const double gain = (stress - next_stress) / stress;
    config = std::move(next);
    distances = std::move(next_distances);
    disparities = std::move(next_disparities);
    stress = next_stress;
    trace.push_back(stress);
    if (gain < opts.tol) break;
  }
  return {std::move(config), stress, std::move(trace)};
}

}  // namespace

double kruskal_stress1(const Eigen::MatrixXd& distances, const Eigen::MatrixXd& disparities) {
  double num = 0.0, den = 0.0;
  for (Eigen::Index j = 0; j < distances.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double r = distances(i, j) - disparities(i, j);
      num += r * r;
      den += distances(i, j) * distances(i, j);
    }
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : 1.0;
  return std::min(1.0, std::sqrt(num / den));
}

Eigen::MatrixXd monotone_disparities(const Eigen::MatrixXd& dissimilarities,
                                     const Eigen::MatrixXd& distances) {
  const Eigen::Index n = dissimilarities.rows();
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i) pairs.push_back({i, j});

  // Primary approach to ties: tied dissimilarities are ordered by the current
  // distances, so they are free to receive different disparities.
  std::stable_sort(pairs.begin(), pairs.end(), [&](const Pair& x, const Pair& y) {
    const double dx = dissimilarities(x.a, x.b), dy = dissimilarities(y.a, y.b);
    if (dx != dy) return dx < dy;
    return distances(x.a, x.b) < distances(y.a, y.b);
  });

  // Pool-adjacent-violators on the distances in that order.
  std::vector<double> block_sum;
  std::vector<std::size_t> block_len;
  for (const auto& p : pairs) {
    block_sum.push_back(distances(p.a, p.b));
    block_len.push_back(1);
    while (block_sum.size() > 1) {
      const auto last = block_sum.size() - 1;
      const double mean_last = block_sum[last] / static_cast<double>(block_len[last]);
      const double mean_prev = block_sum[last - 1] / static_cast<double>(block_len[last - 1]);
      if (mean_prev <= mean_last) break;
      block_sum[last - 1] += block_sum[last];
      block_len[last - 1] += block_len[last];
      block_sum.pop_back();
      block_len.pop_back();
    }
  }

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  std::size_t pos = 0;
  for (std::size_t b = 0; b < block_sum.size(); ++b) {
    const double value = block_sum[b] / static_cast<double>(block_len[b]);
    for (std::size_t r = 0; r < block_len[b]; ++r, ++pos) {
      out(pairs[pos].a, pairs[pos].b) = value;
      out(pairs[pos].b, pairs[pos].a) = value;
    }
  }
  return out;
}

Eigen::MatrixXd classical_mds(const Eigen::MatrixXd& dissimilarities, int dims) {
  const Eigen::Index n = dissimilarities.rows();
  const Eigen::MatrixXd sq = dissimilarities.cwiseProduct(dissimilarities);
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd gram = -0.5 * centering * sq * centering;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);

  Eigen::MatrixXd coords(n, dims);
  for (int c = 0; c < dims; ++c) {
    const Eigen::Index src = n - 1 - c;  // eigenvalues come ascending
    Eigen::VectorXd v = eig.eigenvectors().col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    coords.col(c) = v * std::sqrt(std::max(eig.eigenvalues()(src), 0.0));
  }
  return coords;
}

MdsEmbedding mds_embed(const Eigen::MatrixXd& dissimilarities, const MdsOptions& opts,
                       std::vector<std::string> terms) {
  validate_dissimilarities(dissimilarities);
  const Eigen::Index n = dissimilarities.rows();
  if (opts.dims < 1 || opts.dims >= n)
    throw Error(ErrorCode::Parameter, "mds: dims must lie in [1, number of points)");
  if (opts.restarts < 1 || opts.max_iter < 1)
    throw Error(ErrorCode::Parameter, "mds: restarts and max_iter must be positive");

  std::vector<RunResult> runs(static_cast<std::size_t>(opts.restarts));
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < opts.restarts; ++r) {
    Eigen::MatrixXd init;
    if (r == 0) init = classical_mds(dissimilarities, opts.dims);
    if (r != 0 || kernels::serial::pairwise_distances(init).squaredNorm() == 0.0)
      init = random_configuration(n, opts.dims, derive_seed(opts.seed, static_cast<std::uint64_t>(r)));
    runs[static_cast<std::size_t>(r)] = run_smacof(dissimilarities, std::move(init), opts);
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].stress1 < runs[best].stress1) best = r;

  MdsEmbedding out;
  out.terms = terms.empty() ? std::vector<std::string>{} : std::move(terms);
  if (out.terms.empty())
    for (Eigen::Index i = 0; i < n; ++i) out.terms.push_back("t" + std::to_string(i));
  out.coords = runs[best].coords;
  out.coords.rowwise() -= out.coords.colwise().mean();
  out.stress1 = runs[best].stress1;
  out.stress_trace = runs[best].trace;
  for (auto& run : runs) out.restart_traces.push_back(std::move(run.trace));
  out.restarts_used = opts.restarts;
  out.best_restart = static_cast<int>(best);
  return out;
}

}  // namespace act
