#pragma once

#include "act/corpus.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace act {

/// Truncated SVD N ~ U S V^T of a term x track matrix.
struct SvdModel {
  std::vector<std::string> terms;
  Eigen::MatrixXd u;  // terms x k
  Eigen::VectorXd s;  // k, descending, strictly positive
  Eigen::MatrixXd v;  // tracks x k

  Eigen::Index rank() const noexcept { return s.size(); }
  /// Rows U_i S, the term configuration of the latent space.
  Eigen::MatrixXd term_loadings() const { return u * s.asDiagonal(); }
};

struct NmfModel {
  std::vector<std::string> terms;
  Eigen::MatrixXd w;  // terms x k
  Eigen::MatrixXd h;  // k x tracks
  std::vector<double> objective_trace;
  std::uint64_t seed = 0;

  Eigen::Index rank() const noexcept { return w.cols(); }
};

struct PlsaModel {
  std::vector<std::string> terms;
  Eigen::MatrixXd p_w_given_z;  // terms x k, columns sum to 1
  Eigen::MatrixXd p_z_given_t;  // k x tracks, columns sum to 1
  Eigen::VectorXd p_t;          // tracks
  std::vector<double> loglik_trace;
  std::uint64_t seed = 0;

  Eigen::Index rank() const noexcept { return p_w_given_z.cols(); }
};

struct IterativeOptions {
  int max_iter = 200;
  double tol = 1e-6;
};

inline constexpr IterativeOptions kFoldInDefaults{50, 1e-6};

// SVD --------------------------------------------------------------------

SvdModel svd_fit(const Eigen::MatrixXd& matrix, Eigen::Index k);
SvdModel svd_fit(const TermDocMatrix& matrix, Eigen::Index k);

/// Folds q into the latent space (S^-1 U^T q) and maps it back: weight of
/// term i is U_i S q_hat.
Eigen::VectorXd svd_predict_weights(const SvdModel& model, const SparseVector& q);

/// 1 - cos(U_i S, U_j S) for all term pairs.
Eigen::MatrixXd term_dissimilarity(const SvdModel& model);

/// Same measure on arbitrary term rows (e.g. raw TF-IDF rows).
Eigen::MatrixXd cosine_term_dissimilarity(const Eigen::MatrixXd& rows,
                                          const std::vector<std::string>& terms);

// NMF --------------------------------------------------------------------

/// Lee-Seung multiplicative updates for 1/2 ||N - WH||_F^2, factors drawn
/// uniformly from (0, 1] with `seed`.
NmfModel nmf_fit(const Eigen::MatrixXd& matrix, Eigen::Index k, IterativeOptions opts, std::uint64_t seed);
NmfModel nmf_fit(const TermDocMatrix& matrix, Eigen::Index k, IterativeOptions opts, std::uint64_t seed);

/// Non-negative coefficients c minimizing 1/2 ||q - W c||^2 with the basis
/// held fixed.
Eigen::VectorXd nmf_fold_in(const NmfModel& model, const SparseVector& q,
                            IterativeOptions opts = kFoldInDefaults);
/// W c for the folded-in coefficients.
Eigen::VectorXd nmf_predict_weights(const NmfModel& model, const SparseVector& q,
                                    IterativeOptions opts = kFoldInDefaults);

// PLSA -------------------------------------------------------------------

PlsaModel plsa_fit(const Eigen::MatrixXd& matrix, Eigen::Index k, IterativeOptions opts, std::uint64_t seed);
PlsaModel plsa_fit(const TermDocMatrix& matrix, Eigen::Index k, IterativeOptions opts, std::uint64_t seed);

/// P(z|q) by EM with P(w|z) frozen, starting from the uniform distribution.
Eigen::VectorXd plsa_fold_in(const PlsaModel& model, const SparseVector& q,
                             IterativeOptions opts = kFoldInDefaults);
/// sum_z P(w_i|z) P(z|q).
Eigen::VectorXd plsa_predict_weights(const PlsaModel& model, const SparseVector& q,
                                     IterativeOptions opts = kFoldInDefaults);

}  // namespace act
