#include "act/factorize.hpp"

#include "act/error.hpp"
#include "act/kernels.hpp"
#include "act/random.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace act {

namespace {

using kernels::kDenominatorFloor;

std::vector<std::string> default_terms(Eigen::Index n) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back("t" + std::to_string(i));
  return out;
}

void check_rank(Eigen::Index k, Eigen::Index limit, const char* what) {
  if (k < 1 || k > limit)
    throw Error(ErrorCode::Parameter, std::string(what) + ": rank " + std::to_string(k) +
                                          " outside [1, " + std::to_string(limit) + "]");
}

void check_options(const IterativeOptions& opts) {
  if (opts.max_iter < 1) throw Error(ErrorCode::Parameter, "max_iter must be at least 1");
  if (!(opts.tol >= 0.0)) throw Error(ErrorCode::Parameter, "tol must be non-negative");
}

Eigen::VectorXd query_to_dense(const SparseVector& q, std::size_t size) {
  bool any = false;
  for (const auto& e : q) any = any || e.value != 0.0;
  if (!any) throw Error(ErrorCode::EmptyQuery, "query vector is empty");
  return to_dense(q, size);
}

void check_nonnegative_query(const SparseVector& q) {
  for (const auto& e : q)
    if (e.value < 0.0) throw Error(ErrorCode::Parameter, "query weights must be non-negative");
}

void check_nonnegative(const Eigen::MatrixXd& m) {
  if ((m.array() < 0.0).any() || !m.allFinite())
    throw Error(ErrorCode::Parameter, "matrix must be finite and non-negative");
}

Eigen::MatrixXd random_unit_interval(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = uniform_open_closed(rng);
  return m;
}

void normalize_columns(Eigen::MatrixXd& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double total = m.col(c).sum();
    if (total < kDenominatorFloor)
      m.col(c).setConstant(1.0 / static_cast<double>(m.rows()));
    else
      m.col(c) /= total;
  }
}

bool converged(double previous, double current, double tol, bool maximizing) {
  const double gain = maximizing ? current - previous : previous - current;
  return gain / std::max(std::abs(previous), kDenominatorFloor) < tol;
}

}  // namespace

// ---------------------------------------------------------------------------
// SVD

SvdModel svd_fit(const Eigen::MatrixXd& matrix, Eigen::Index k) {
  check_rank(k, std::min(matrix.rows(), matrix.cols()), "svd_fit");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = static_cast<double>(std::max(matrix.rows(), matrix.cols())) *
                        std::numeric_limits<double>::epsilon() * (sv.size() ? sv(0) : 0.0);
  if (!(sv(k - 1) > cutoff))
    throw Error(ErrorCode::Parameter, "svd_fit: rank " + std::to_string(k) + " exceeds the numerical rank");

  SvdModel model;
  model.terms = default_terms(matrix.rows());
  model.u = svd.matrixU().leftCols(k);
  model.s = sv.head(k);
  model.v = svd.matrixV().leftCols(k);
  // Fix the sign ambiguity: largest-magnitude entry of each U column positive.
  for (Eigen::Index c = 0; c < k; ++c) {
    Eigen::Index arg = 0;
    model.u.col(c).cwiseAbs().maxCoeff(&arg);
    if (model.u(arg, c) < 0.0) {
      model.u.col(c) *= -1.0;
      model.v.col(c) *= -1.0;
    }
  }
  return model;
}

SvdModel svd_fit(const TermDocMatrix& matrix, Eigen::Index k) {
  auto model = svd_fit(matrix.dense(), k);
  model.terms = matrix.terms();
  return model;
}

Eigen::VectorXd svd_predict_weights(const SvdModel& model, const SparseVector& q) {
  const Eigen::VectorXd dense = query_to_dense(q, static_cast<std::size_t>(model.u.rows()));
  const Eigen::VectorXd folded = model.s.cwiseInverse().asDiagonal() * (model.u.transpose() * dense);
  return model.u * (model.s.asDiagonal() * folded);
}

Eigen::MatrixXd cosine_term_dissimilarity(const Eigen::MatrixXd& rows,
                                          const std::vector<std::string>& terms) {
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    if (rows.row(i).squaredNorm() == 0.0) {
      const auto name = static_cast<std::size_t>(i) < terms.size() ? terms[static_cast<std::size_t>(i)]
                                                                    : std::to_string(i);
      throw Error(ErrorCode::DegenerateTerm, "term '" + name + "' has a zero-norm latent row");
    }
  }
  return kernels::parallel::cosine_dissimilarity(rows);
}

Eigen::MatrixXd term_dissimilarity(const SvdModel& model) {
  return cosine_term_dissimilarity(model.term_loadings(), model.terms);
}

// ---------------------------------------------------------------------------
// NMF

NmfModel nmf_fit(const Eigen::MatrixXd& matrix, Eigen::Index k, IterativeOptions opts, std::uint64_t seed) {
  check_nonnegative(matrix);
  check_options(opts);
  if (k < 1) throw Error(ErrorCode::Parameter, "nmf_fit: rank must be at least 1");

  Rng rng(seed);
  NmfModel model;
  model.terms = default_terms(matrix.rows());
  model.seed = seed;
  model.w = random_unit_interval(matrix.rows(), k, rng);
  model.h = random_unit_interval(k, matrix.cols(), rng);
  auto& w = model.w;
  auto& h = model.h;

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const Eigen::MatrixXd h_num = w.transpose() * matrix;
    const Eigen::MatrixXd h_den = (w.transpose() * w) * h;
    h = h.cwiseProduct(h_num.cwiseQuotient(h_den.cwiseMax(kDenominatorFloor)));

    const Eigen::MatrixXd w_num = matrix * h.transpose();
    const Eigen::MatrixXd w_den = w * (h * h.transpose());
    w = w.cwiseProduct(w_num.cwiseQuotient(w_den.cwiseMax(kDenominatorFloor)));

    const double objective = 0.5 * (matrix - w * h).squaredNorm();
    model.objective_trace.push_back(objective);
    const auto n = model.objective_trace.size();
    if (n > 1 && converged(model.objective_trace[n - 2], objective, opts.tol, false)) break;
  }
  return model;
}

NmfModel nmf_fit(const TermDocMatrix& matrix, Eigen::Index k, IterativeOptions opts, std::uint64_t seed) {
  auto model = nmf_fit(matrix.dense(), k, opts, seed);
  model.terms = matrix.terms();
  return model;
}

Eigen::VectorXd nmf_fold_in(const NmfModel& model, const SparseVector& q, IterativeOptions opts) {
  check_options(opts);
  check_nonnegative_query(q);
  const Eigen::VectorXd dense = query_to_dense(q, static_cast<std::size_t>(model.w.rows()));
  const auto& w = model.w;

  // Warm start from the clipped unconstrained least-squares solution; zero
  // entries would be frozen by the multiplicative rule, so they are lifted.
  Eigen::VectorXd c = w.colPivHouseholderQr().solve(dense);
  const double lift = 1e-6 * std::max(c.maxCoeff(), 1.0);
  for (Eigen::Index z = 0; z < c.size(); ++z)
    if (!(c(z) > lift)) c(z) = lift;

  const Eigen::VectorXd numerator = w.transpose() * dense;
  const Eigen::MatrixXd gram = w.transpose() * w;
  double previous = 0.5 * (dense - w * c).squaredNorm();
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    c = c.cwiseProduct(numerator.cwiseQuotient((gram * c).cwiseMax(kDenominatorFloor)));
    const double objective = 0.5 * (dense - w * c).squaredNorm();
    if (converged(previous, objective, opts.tol, false)) break;
    previous = objective;
  }
  return c;
}

Eigen::VectorXd nmf_predict_weights(const NmfModel& model, const SparseVector& q, IterativeOptions opts) {
  return model.w * nmf_fold_in(model, q, opts);
}

// ---------------------------------------------------------------------------
// PLSA

PlsaModel plsa_fit(const Eigen::MatrixXd& matrix, Eigen::Index k, IterativeOptions opts, std::uint64_t seed) {
  check_nonnegative(matrix);
  check_options(opts);
  if (k < 1) throw Error(ErrorCode::Parameter, "plsa_fit: rank must be at least 1");
  const double total = matrix.sum();
  if (!(total > 0.0)) throw Error(ErrorCode::EmptyCorpus, "plsa_fit: matrix has no mass");

  const kernels::PlsaData data(matrix.sparseView(0.0, 0.0));
  Rng rng(seed);
  PlsaModel model;
  model.terms = default_terms(matrix.rows());
  model.seed = seed;
  model.p_t = matrix.colwise().sum().transpose() / total;
  model.p_w_given_z = random_unit_interval(matrix.rows(), k, rng);
  model.p_z_given_t = random_unit_interval(k, matrix.cols(), rng);
  normalize_columns(model.p_w_given_z);
  normalize_columns(model.p_z_given_t);

  Eigen::MatrixXd acc_w_z, acc_z_t;
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    kernels::parallel::plsa_expected_counts(data, model.p_w_given_z, model.p_z_given_t, acc_w_z, acc_z_t);
    model.p_w_given_z = acc_w_z;
    model.p_z_given_t = acc_z_t;
    normalize_columns(model.p_w_given_z);
    normalize_columns(model.p_z_given_t);

    const double loglik =
        kernels::parallel::plsa_log_likelihood(data, model.p_w_given_z, model.p_z_given_t, model.p_t);
    model.loglik_trace.push_back(loglik);
    const auto n = model.loglik_trace.size();
    if (n > 1 && converged(model.loglik_trace[n - 2], loglik, opts.tol, true)) break;
  }
  return model;
}

PlsaModel plsa_fit(const TermDocMatrix& matrix, Eigen::Index k, IterativeOptions opts, std::uint64_t seed) {
  auto model = plsa_fit(matrix.dense(), k, opts, seed);
  model.terms = matrix.terms();
  return model;
}

Eigen::VectorXd plsa_fold_in(const PlsaModel& model, const SparseVector& q, IterativeOptions opts) {
  check_options(opts);
  check_nonnegative_query(q);
  const auto& p_w_z = model.p_w_given_z;
  query_to_dense(q, static_cast<std::size_t>(p_w_z.rows()));
  const Eigen::Index k = p_w_z.cols();

  auto loglik = [&](const Eigen::VectorXd& p_z) {
    double l = 0.0;
    for (const auto& e : q) {
      const double mix = p_w_z.row(static_cast<Eigen::Index>(e.index)).dot(p_z);
      l += e.value * std::log(std::max(mix, std::numeric_limits<double>::min()));
    }
    return l;
  };

  Eigen::VectorXd p_z = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
  Eigen::VectorXd post(k);
  double previous = loglik(p_z);
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(k);
    for (const auto& e : q) {
      post = p_w_z.row(static_cast<Eigen::Index>(e.index)).transpose().cwiseProduct(p_z);
      post /= std::max(post.sum(), kDenominatorFloor);
      acc += e.value * post;
    }
    const double mass = acc.sum();
    p_z = mass < kDenominatorFloor ? Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k))
                                   : Eigen::VectorXd(acc / mass);
    const double current = loglik(p_z);
    if (converged(previous, current, opts.tol, true)) break;
    previous = current;
  }
  return p_z;
}

Eigen::VectorXd plsa_predict_weights(const PlsaModel& model, const SparseVector& q, IterativeOptions opts) {
  return model.p_w_given_z * plsa_fold_in(model, q, opts);
}

}  // namespace act
