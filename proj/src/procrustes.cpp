#include "act/error.hpp"
#include "act/moodspace.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>

namespace act {

ActModel procrustes_fit(const MdsEmbedding& embedding, const ReferenceSpace& reference) {
  if (embedding.coords.cols() != 3)
    throw Error(ErrorCode::Parameter, "procrustes_fit needs a 3-D configuration");
  if (static_cast<std::size_t>(embedding.coords.rows()) != embedding.terms.size())
    throw Error(ErrorCode::Parameter, "embedding terms and coordinates disagree");

  ActModel act;
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < embedding.terms.size(); ++i) {
    if (auto ref = reference.find(embedding.terms[i])) {
      rows.push_back(static_cast<Eigen::Index>(i));
      act.matched_terms.emplace_back(embedding.terms[i], *ref);
    }
  }

  auto anchor_error = [&](const std::string& why) {
    std::string names;
    for (const auto& [term, _] : act.matched_terms) names += (names.empty() ? "" : ",") + term;
    return Error(ErrorCode::InsufficientAnchor, why + " (matched: " + (names.empty() ? "none" : names) + ")");
  };
  if (rows.size() < 3) throw anchor_error("fewer than 3 embedding terms found in the reference");

  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd y(m, 3), x = Eigen::MatrixXd::Zero(m, 3);
  for (Eigen::Index r = 0; r < m; ++r) {
    y.row(r) = embedding.coords.row(rows[static_cast<std::size_t>(r)]);
    x(r, 0) = act.matched_terms[static_cast<std::size_t>(r)].second.valence;
    x(r, 1) = act.matched_terms[static_cast<std::size_t>(r)].second.arousal;
  }

  const Eigen::RowVector3d mean_y = y.colwise().mean();
  const Eigen::RowVector3d mean_x = x.colwise().mean();
  const Eigen::MatrixXd yc = y.rowwise() - mean_y;
  const Eigen::MatrixXd xc = x.rowwise() - mean_x;

  Eigen::JacobiSVD<Eigen::Matrix2d> ref_spread(xc.leftCols<2>().transpose() * xc.leftCols<2>());
  const auto& ref_sv = ref_spread.singularValues();
  if (!(ref_sv(1) > 1e-12 * std::max(ref_sv(0), 1e-300)))
    throw anchor_error("matched reference positions are collinear");
  const double y_norm2 = yc.squaredNorm();
  if (y_norm2 == 0.0)
    throw Error(ErrorCode::DegenerateTerm, "matched embedding terms all share one position");

  const Eigen::Matrix3d cross = yc.transpose() * xc;
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  const auto& sv = svd.singularValues();
  // A vanishing last singular value leaves its direction's sign free; take
  // the proper rotation in that case. Otherwise reflections are allowed.
  if (sv(2) <= 1e-12 * std::max(sv(0), 1e-300) && (u * v.transpose()).determinant() < 0.0)
    u.col(2) = -u.col(2);
  act.rotation = u * v.transpose();
  act.scale = (yc * act.rotation).cwiseProduct(xc).sum() / y_norm2;
  act.translation = mean_x - act.scale * mean_y * act.rotation;

  act.terms = embedding.terms;
  act.source_coords = embedding.coords;
  act.term_coords = act.transform(embedding.coords);

  const Eigen::MatrixXd fitted = act.transform(y);
  act.fit_x2_raw = (x - fitted).squaredNorm();
  act.fit_x2_standardized = act.fit_x2_raw / xc.squaredNorm();
  act.provenance.mds_stress1 = embedding.stress1;
  return act;
}

}  // namespace act
