#pragma once

// Data-parallel inner loops of the pipeline. Every kernel exists twice: a
// plain serial reference and an OpenMP version. Both evaluate each output
// element with the same arithmetic in the same order, so their results are
// bit-identical for any thread count and the tests compare them with ==.

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <span>

namespace act::kernels {

using ColSparse = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using RowSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Both storage orders of the same term x track matrix.
struct PlsaData {
  ColSparse by_track;
  RowSparse by_term;

  explicit PlsaData(ColSparse m) : by_track(std::move(m)), by_term(by_track) {}
};

/// Denominator floor shared by the multiplicative updates and EM.
inline constexpr double kDenominatorFloor = 1e-12;

namespace serial {

/// Euclidean distances between all rows.
Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& points);

/// 1 - cos between all rows, clamped to [0, 2], zero diagonal. Rows must be
/// non-zero.
Eigen::MatrixXd cosine_dissimilarity(const Eigen::MatrixXd& rows);

/// Distance from each query row to its nearest row of `points`. When
/// exclude is non-empty, exclude[q] >= 0 removes that point from query q's
/// candidates.
Eigen::VectorXd nearest_distances(const Eigen::MatrixXd& queries, const Eigen::MatrixXd& points,
                                  std::span<const Eigen::Index> exclude);

/// SMACOF update (1/n) B(X) X towards the given disparities.
Eigen::MatrixXd guttman_transform(const Eigen::MatrixXd& config, const Eigen::MatrixXd& distances,
                                  const Eigen::MatrixXd& disparities);

/// One EM pass of the aspect model: unnormalized expected counts for
/// P(w|z) (terms x k) and P(z|t) (k x tracks).
void plsa_expected_counts(const PlsaData& data, const Eigen::MatrixXd& p_w_z,
                          const Eigen::MatrixXd& p_z_t, Eigen::MatrixXd& acc_w_z,
                          Eigen::MatrixXd& acc_z_t);

/// Sum over stored cells of N_ij * log(P(t_j) * sum_z P(w_i|z) P(z|t_j)).
double plsa_log_likelihood(const PlsaData& data, const Eigen::MatrixXd& p_w_z,
                           const Eigen::MatrixXd& p_z_t, const Eigen::VectorXd& p_t);

}  // namespace serial

namespace parallel {

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& points);
Eigen::MatrixXd cosine_dissimilarity(const Eigen::MatrixXd& rows);
Eigen::VectorXd nearest_distances(const Eigen::MatrixXd& queries, const Eigen::MatrixXd& points,
                                  std::span<const Eigen::Index> exclude);
Eigen::MatrixXd guttman_transform(const Eigen::MatrixXd& config, const Eigen::MatrixXd& distances,
                                  const Eigen::MatrixXd& disparities);
void plsa_expected_counts(const PlsaData& data, const Eigen::MatrixXd& p_w_z,
                          const Eigen::MatrixXd& p_z_t, Eigen::MatrixXd& acc_w_z,
                          Eigen::MatrixXd& acc_z_t);
double plsa_log_likelihood(const PlsaData& data, const Eigen::MatrixXd& p_w_z,
                           const Eigen::MatrixXd& p_z_t, const Eigen::VectorXd& p_t);

}  // namespace parallel

}  // namespace act::kernels
