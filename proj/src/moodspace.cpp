#include "act/moodspace.hpp"

#include "act/error.hpp"
#include "act/text.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace act {

// ---------------------------------------------------------------------------
// ReferenceSpace

void ReferenceSpace::add(const std::string& term, ReferencePoint point) {
  auto norm = text::normalize(term);
  if (norm.empty()) throw Error(ErrorCode::Schema, "reference term is empty after normalization");
  for (auto& [existing, p] : entries_) {
    if (existing == norm) {
      p = point;
      return;
    }
  }
  entries_.emplace_back(std::move(norm), point);
}

std::optional<ReferencePoint> ReferenceSpace::find(const std::string& term) const {
  const auto norm = text::normalize(term);
  for (const auto& [existing, p] : entries_)
    if (existing == norm) return p;
  return std::nullopt;
}

ReferenceSpace read_reference(std::istream& in, std::string source_label) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Schema, "reference: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "term\tvalence\tarousal")
    throw Error(ErrorCode::Schema, "reference: expected header 'term<TAB>valence<TAB>arousal'");

  ReferenceSpace space(std::move(source_label));
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = text::split(line, '\t');
    auto bad = [&] {
      return Error(ErrorCode::Schema, "reference line " + std::to_string(line_no) +
                                          ": expected term and two values in [-1, 1]");
    };
    if (fields.size() != 3) throw bad();
    double va[2];
    for (int c = 0; c < 2; ++c) {
      std::size_t used = 0;
      try {
        va[c] = std::stod(fields[static_cast<std::size_t>(c + 1)], &used);
      } catch (const std::exception&) {
        throw bad();
      }
      if (used != fields[static_cast<std::size_t>(c + 1)].size() || !(va[c] >= -1.0 && va[c] <= 1.0))
        throw bad();
    }
    space.add(fields[0], {va[0], va[1]});
  }
  return space;
}

std::string_view to_string(ActVariant v) noexcept {
  switch (v) {
    case ActVariant::Standard: return "standard";
    case ActVariant::SvdOnly: return "svd-only";
    case ActVariant::MdsOnly: return "mds-only";
  }
  return "standard";
}

ActVariant parse_variant(std::string_view name) {
  if (name == "standard") return ActVariant::Standard;
  if (name == "svd-only" || name == "svd_only") return ActVariant::SvdOnly;
  if (name == "mds-only" || name == "mds_only") return ActVariant::MdsOnly;
  throw Error(ErrorCode::Parameter, "unknown ACT variant '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// ActModel

std::optional<std::size_t> ActModel::term_index(const std::string& term) const {
  const auto norm = text::normalize(term);
  auto it = std::find(terms.begin(), terms.end(), norm);
  if (it == terms.end()) return std::nullopt;
  return static_cast<std::size_t>(it - terms.begin());
}

Eigen::MatrixXd ActModel::transform(const Eigen::MatrixXd& rows) const {
  Eigen::MatrixXd out = scale * rows * rotation;
  out.rowwise() += translation;
  return out;
}

Eigen::Vector3d project_track(const ActModel& act, const SparseVector& q) {
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  double mass = 0.0;
  for (const auto& e : q) {
    if (e.index >= static_cast<std::size_t>(act.term_coords.rows()))
      throw Error(ErrorCode::Parameter, "query term index outside the model");
    acc += e.value * act.term_coords.row(static_cast<Eigen::Index>(e.index)).transpose();
    mass += e.value;
  }
  if (q.empty() || !(mass > 0.0)) throw Error(ErrorCode::EmptyQuery, "query has no positive weight");
  return acc / mass;
}

// ---------------------------------------------------------------------------
// Read-off

std::string_view to_string(MoodDimension d) noexcept {
  switch (d) {
    case MoodDimension::Valence: return "valence";
    case MoodDimension::Arousal: return "arousal";
    case MoodDimension::Tension: return "tension";
  }
  return "valence";
}

std::optional<MoodDimension> parse_dimension(std::string_view name) {
  if (name == "valence") return MoodDimension::Valence;
  if (name == "arousal") return MoodDimension::Arousal;
  if (name == "tension") return MoodDimension::Tension;
  return std::nullopt;
}

Eigen::Vector3d dimension_axis(MoodDimension d) {
  switch (d) {
    case MoodDimension::Valence: return {1.0, 0.0, 0.0};
    case MoodDimension::Arousal: return {0.0, 1.0, 0.0};
    case MoodDimension::Tension: return Eigen::Vector3d(-1.0, 1.0, 0.0) / std::numbers::sqrt2;
  }
  return {1.0, 0.0, 0.0};
}

double predict_dimension(const Eigen::Vector3d& position, MoodDimension dimension) {
  switch (dimension) {
    case MoodDimension::Valence: return position(0);
    case MoodDimension::Arousal: return position(1);
    case MoodDimension::Tension: return (position(1) - position(0)) / std::numbers::sqrt2;
  }
  return 0.0;
}

double predict_term(const ActModel& act, const Eigen::Vector3d& position, const std::string& term) {
  auto idx = act.term_index(term);
  if (!idx) throw Error(ErrorCode::Parameter, "term '" + term + "' is not in the model");
  const Eigen::Vector3d x = act.term_coords.row(static_cast<Eigen::Index>(*idx)).transpose();
  const double norm = x.norm();
  if (norm == 0.0) throw Error(ErrorCode::DegenerateTerm, "term '" + term + "' sits at the origin");
  return x.dot(position) / norm;
}

std::vector<DimensionProxy> select_dimension_proxy(const ActModel& act,
                                                   const std::vector<std::size_t>& term_prevalence,
                                                   std::size_t num_tracks, double min_share) {
  if (term_prevalence.size() != act.terms.size())
    throw Error(ErrorCode::Parameter, "prevalence list does not match the model terms");
  const double threshold = min_share * static_cast<double>(num_tracks);

  std::vector<DimensionProxy> out;
  for (auto dim : {MoodDimension::Valence, MoodDimension::Arousal, MoodDimension::Tension}) {
    const Eigen::Vector3d axis = dimension_axis(dim);
    std::optional<DimensionProxy> best;
    for (std::size_t i = 0; i < act.terms.size(); ++i) {
      if (static_cast<double>(term_prevalence[i]) < threshold) continue;
      const Eigen::Vector3d x = act.term_coords.row(static_cast<Eigen::Index>(i)).transpose();
      const double norm = x.norm();
      if (norm == 0.0) continue;
      const double cosine = std::clamp(x.dot(axis) / norm, -1.0, 1.0);
      DimensionProxy cand{dim, act.terms[i], std::acos(cosine) * 180.0 / std::numbers::pi, term_prevalence[i]};
      if (!best) {
        best = cand;
        continue;
      }
      const double delta = cand.angle_degrees - best->angle_degrees;
      const bool better = delta < -1e-9 ||
                          (std::abs(delta) <= 1e-9 &&
                           (cand.prevalence > best->prevalence ||
                            (cand.prevalence == best->prevalence && cand.term < best->term)));
      if (better) best = cand;
    }
    if (!best)
      throw Error(ErrorCode::EmptyCandidate, "no term reaches the prevalence share for " + std::string(to_string(dim)));
    out.push_back(*best);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Variants

ActModel act_fit(const TermDocMatrix& matrix, const ReferenceSpace& reference, ActVariant variant,
                 const ActOptions& opts) {
  if (opts.mds.dims != 3) throw Error(ErrorCode::Parameter, "ACT needs a 3-D mood space");
  ActModel act;
  switch (variant) {
    case ActVariant::Standard: {
      const auto svd = svd_fit(matrix, opts.k);
      const auto embedding = mds_embed(term_dissimilarity(svd), opts.mds, matrix.terms());
      act = procrustes_fit(embedding, reference);
      act.provenance.k = opts.k;
      break;
    }
    case ActVariant::SvdOnly: {
      const auto svd = svd_fit(matrix, 3);
      MdsEmbedding config;
      config.terms = matrix.terms();
      config.coords = svd.term_loadings();
      config.coords.rowwise() -= config.coords.colwise().mean();
      act = procrustes_fit(config, reference);
      act.provenance.k = 3;
      break;
    }
    case ActVariant::MdsOnly: {
      const auto dissim = cosine_term_dissimilarity(matrix.dense(), matrix.terms());
      const auto embedding = mds_embed(dissim, opts.mds, matrix.terms());
      act = procrustes_fit(embedding, reference);
      act.provenance.k = static_cast<Eigen::Index>(matrix.num_terms());
      break;
    }
  }
  act.provenance.variant = variant;
  act.provenance.seed = opts.mds.seed;
  return act;
}

}  // namespace act
