#include "act/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace act::kernels {

namespace {

using Index = Eigen::Index;

inline double squared_row_distance(const Eigen::MatrixXd& a, Index i, const Eigen::MatrixXd& b, Index j) {
  double s = 0.0;
  for (Index c = 0; c < a.cols(); ++c) {
    const double d = a(i, c) - b(j, c);
    s += d * d;
  }
  return s;
}

inline double row_dot(const Eigen::MatrixXd& m, Index i, Index j) {
  double s = 0.0;
  for (Index c = 0; c < m.cols(); ++c) s += m(i, c) * m(j, c);
  return s;
}

inline double cosine_entry(const Eigen::MatrixXd& rows, const Eigen::VectorXd& norms, Index i, Index j) {
  const double d = 1.0 - row_dot(rows, i, j) / (norms(i) * norms(j));
  return std::clamp(d, 0.0, 2.0);
}

Eigen::VectorXd row_norms(const Eigen::MatrixXd& rows) {
  Eigen::VectorXd norms(rows.rows());
  for (Index i = 0; i < rows.rows(); ++i) norms(i) = std::sqrt(row_dot(rows, i, i));
  return norms;
}

inline double nearest_for(const Eigen::MatrixXd& queries, Index q, const Eigen::MatrixXd& points, Index skip) {
  double best = std::numeric_limits<double>::infinity();
  for (Index p = 0; p < points.rows(); ++p) {
    if (p == skip) continue;
    best = std::min(best, squared_row_distance(queries, q, points, p));
  }
  return std::sqrt(best);
}

inline double guttman_weight(const Eigen::MatrixXd& distances, const Eigen::MatrixXd& disparities, Index i, Index j) {
  const double d = distances(i, j);
  return d > 0.0 ? -disparities(i, j) / d : 0.0;
}

inline void guttman_row(const Eigen::MatrixXd& config, const Eigen::MatrixXd& distances,
                        const Eigen::MatrixXd& disparities, Index i, Eigen::MatrixXd& out) {
  const Index n = config.rows();
  double diag = 0.0;
  for (Index j = 0; j < n; ++j)
    if (j != i) diag -= guttman_weight(distances, disparities, i, j);
  for (Index c = 0; c < config.cols(); ++c) {
    double acc = 0.0;
    for (Index j = 0; j < n; ++j) {
      const double b = (j == i) ? diag : guttman_weight(distances, disparities, i, j);
      acc += b * config(j, c);
    }
    out(i, c) = acc / static_cast<double>(n);
  }
}

// Posterior P(z | w_i, t_j) written into `post`.
inline void aspect_posterior(const Eigen::MatrixXd& p_w_z, const Eigen::MatrixXd& p_z_t, Index i, Index j,
                             double* post) {
  const Index k = p_w_z.cols();
  double total = 0.0;
  for (Index z = 0; z < k; ++z) {
    post[z] = p_w_z(i, z) * p_z_t(z, j);
    total += post[z];
  }
  total = std::max(total, kDenominatorFloor);
  for (Index z = 0; z < k; ++z) post[z] /= total;
}

inline double track_log_likelihood(const PlsaData& data, const Eigen::MatrixXd& p_w_z,
                                   const Eigen::MatrixXd& p_z_t, const Eigen::VectorXd& p_t, Index j) {
  double partial = 0.0;
  for (ColSparse::InnerIterator it(data.by_track, j); it; ++it) {
    double mix = 0.0;
    for (Index z = 0; z < p_w_z.cols(); ++z) mix += p_w_z(it.row(), z) * p_z_t(z, j);
    partial += it.value() * std::log(std::max(p_t(j) * mix, std::numeric_limits<double>::min()));
  }
  return partial;
}

}  // namespace

// ---------------------------------------------------------------------------

namespace serial {

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& points) {
  const Index n = points.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      out(i, j) = std::sqrt(squared_row_distance(points, i, points, j));
      out(j, i) = out(i, j);
    }
  }
  return out;
}

Eigen::MatrixXd cosine_dissimilarity(const Eigen::MatrixXd& rows) {
  const Index n = rows.rows();
  const Eigen::VectorXd norms = row_norms(rows);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      out(i, j) = cosine_entry(rows, norms, i, j);
      out(j, i) = out(i, j);
    }
  }
  return out;
}

Eigen::VectorXd nearest_distances(const Eigen::MatrixXd& queries, const Eigen::MatrixXd& points,
                                  std::span<const Eigen::Index> exclude) {
  Eigen::VectorXd out(queries.rows());
  for (Index q = 0; q < queries.rows(); ++q)
    out(q) = nearest_for(queries, q, points, exclude.empty() ? -1 : exclude[static_cast<std::size_t>(q)]);
  return out;
}

Eigen::MatrixXd guttman_transform(const Eigen::MatrixXd& config, const Eigen::MatrixXd& distances,
                                  const Eigen::MatrixXd& disparities) {
  Eigen::MatrixXd out(config.rows(), config.cols());
  for (Index i = 0; i < config.rows(); ++i) guttman_row(config, distances, disparities, i, out);
  return out;
}

void plsa_expected_counts(const PlsaData& data, const Eigen::MatrixXd& p_w_z,
                          const Eigen::MatrixXd& p_z_t, Eigen::MatrixXd& acc_w_z,
                          Eigen::MatrixXd& acc_z_t) {
  const Index k = p_w_z.cols();
  acc_w_z.setZero(p_w_z.rows(), k);
  acc_z_t.setZero(k, p_z_t.cols());
  std::vector<double> post(static_cast<std::size_t>(k));
  for (Index j = 0; j < data.by_track.outerSize(); ++j) {
    for (ColSparse::InnerIterator it(data.by_track, j); it; ++it) {
      aspect_posterior(p_w_z, p_z_t, it.row(), j, post.data());
      for (Index z = 0; z < k; ++z) {
        const double mass = it.value() * post[static_cast<std::size_t>(z)];
        acc_w_z(it.row(), z) += mass;
        acc_z_t(z, j) += mass;
      }
    }
  }
}

double plsa_log_likelihood(const PlsaData& data, const Eigen::MatrixXd& p_w_z,
                           const Eigen::MatrixXd& p_z_t, const Eigen::VectorXd& p_t) {
  double total = 0.0;
  for (Index j = 0; j < data.by_track.outerSize(); ++j)
    total += track_log_likelihood(data, p_w_z, p_z_t, p_t, j);
  return total;
}

}  // namespace serial

// ---------------------------------------------------------------------------

namespace parallel {

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& points) {
  const Index n = points.rows();
  Eigen::MatrixXd out(n, n);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      out(i, j) = (i == j) ? 0.0 : std::sqrt(squared_row_distance(points, i, points, j));
  return out;
}

Eigen::MatrixXd cosine_dissimilarity(const Eigen::MatrixXd& rows) {
  const Index n = rows.rows();
  const Eigen::VectorXd norms = row_norms(rows);
  Eigen::MatrixXd out(n, n);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      out(i, j) = (i == j) ? 0.0 : cosine_entry(rows, norms, std::min(i, j), std::max(i, j));
  return out;
}

Eigen::VectorXd nearest_distances(const Eigen::MatrixXd& queries, const Eigen::MatrixXd& points,
                                  std::span<const Eigen::Index> exclude) {
  Eigen::VectorXd out(queries.rows());
#pragma omp parallel for schedule(static)
  for (Index q = 0; q < queries.rows(); ++q)
    out(q) = nearest_for(queries, q, points, exclude.empty() ? -1 : exclude[static_cast<std::size_t>(q)]);
  return out;
}

Eigen::MatrixXd guttman_transform(const Eigen::MatrixXd& config, const Eigen::MatrixXd& distances,
                                  const Eigen::MatrixXd& disparities) {
  Eigen::MatrixXd out(config.rows(), config.cols());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < config.rows(); ++i) guttman_row(config, distances, disparities, i, out);
  return out;
}

void plsa_expected_counts(const PlsaData& data, const Eigen::MatrixXd& p_w_z,
                          const Eigen::MatrixXd& p_z_t, Eigen::MatrixXd& acc_w_z,
                          Eigen::MatrixXd& acc_z_t) {
  const Index k = p_w_z.cols();
  acc_w_z.setZero(p_w_z.rows(), k);
  acc_z_t.setZero(k, p_z_t.cols());

  // Track-major pass owns the P(z|t) columns, term-major pass owns the
  // P(w|z) rows; each accumulates in ascending track order like the serial loop.
#pragma omp parallel
  {
    std::vector<double> post(static_cast<std::size_t>(k));
#pragma omp for schedule(static)
    for (Index j = 0; j < data.by_track.outerSize(); ++j) {
      for (ColSparse::InnerIterator it(data.by_track, j); it; ++it) {
        aspect_posterior(p_w_z, p_z_t, it.row(), j, post.data());
        for (Index z = 0; z < k; ++z) acc_z_t(z, j) += it.value() * post[static_cast<std::size_t>(z)];
      }
    }
#pragma omp for schedule(static)
    for (Index i = 0; i < data.by_term.outerSize(); ++i) {
      for (RowSparse::InnerIterator it(data.by_term, i); it; ++it) {
        aspect_posterior(p_w_z, p_z_t, i, it.col(), post.data());
        for (Index z = 0; z < k; ++z) acc_w_z(i, z) += it.value() * post[static_cast<std::size_t>(z)];
      }
    }
  }
}

double plsa_log_likelihood(const PlsaData& data, const Eigen::MatrixXd& p_w_z,
                           const Eigen::MatrixXd& p_z_t, const Eigen::VectorXd& p_t) {
  const Index n = data.by_track.outerSize();
  Eigen::VectorXd partial(n);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < n; ++j) partial(j) = track_log_likelihood(data, p_w_z, p_z_t, p_t, j);
  double total = 0.0;
  for (Index j = 0; j < n; ++j) total += partial(j);
  return total;
}

}  // namespace parallel

}  // namespace act::kernels
