#pragma once

#include "act/corpus.hpp"
#include "act/factorize.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace act {

// Non-metric MDS ------------------------------------------------------------

struct MdsOptions {
  int dims = 3;
  int restarts = 4;  // first restart starts from classical MDS, the rest at random
  int max_iter = 300;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

struct MdsEmbedding {
  std::vector<std::string> terms;
  Eigen::MatrixXd coords;  // points x dims, column means zero
  double stress1 = 0.0;
  int restarts_used = 0;
  int best_restart = 0;
  /// Stress-1 after every accepted iteration of the reported restart.
  std::vector<double> stress_trace;
  /// Stress traces of all restarts, in restart order. Not serialized.
  std::vector<std::vector<double>> restart_traces;

  int dims() const noexcept { return static_cast<int>(coords.cols()); }
};

/// Kruskal Stress-1 of a configuration against given disparities.
double kruskal_stress1(const Eigen::MatrixXd& distances, const Eigen::MatrixXd& disparities);

/// Monotone (primary tie approach) least-squares fit of the configuration
/// distances to the order of the dissimilarities, upper triangle only.
Eigen::MatrixXd monotone_disparities(const Eigen::MatrixXd& dissimilarities,
                                     const Eigen::MatrixXd& distances);

/// Torgerson scaling: top `dims` eigenvectors of the double-centered
/// squared dissimilarities.
Eigen::MatrixXd classical_mds(const Eigen::MatrixXd& dissimilarities, int dims);

/// Minimizes Stress-1 by alternating Guttman transforms with isotonic
/// regression; returns the best restart, centered.
MdsEmbedding mds_embed(const Eigen::MatrixXd& dissimilarities, const MdsOptions& opts,
                       std::vector<std::string> terms = {});

// Reference space and Procrustes ---------------------------------------------

struct ReferencePoint {
  double valence;
  double arousal;
};

/// Valence-arousal positions of reference terms. Later entries for the same
/// normalized term override earlier ones.
class ReferenceSpace {
 public:
  ReferenceSpace() = default;
  explicit ReferenceSpace(std::string source_label) : source_label_(std::move(source_label)) {}

  void add(const std::string& term, ReferencePoint point);
  std::optional<ReferencePoint> find(const std::string& term) const;

  const std::vector<std::pair<std::string, ReferencePoint>>& entries() const noexcept { return entries_; }
  const std::string& source_label() const noexcept { return source_label_; }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::vector<std::pair<std::string, ReferencePoint>> entries_;
  std::string source_label_;
};

ReferenceSpace read_reference(std::istream& in, std::string source_label);

enum class ActVariant { Standard, SvdOnly, MdsOnly };

std::string_view to_string(ActVariant v) noexcept;
ActVariant parse_variant(std::string_view name);

struct ActProvenance {
  ActVariant variant = ActVariant::Standard;
  Eigen::Index k = 0;
  std::uint64_t seed = 0;
  double mds_stress1 = 0.0;
};

/// Mood space aligned to the reference: x_hat_i = B y_i T + C (row vectors).
struct ActModel {
  double scale = 1.0;                                // B
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // T, orthogonal
  Eigen::RowVector3d translation = Eigen::RowVector3d::Zero();  // C
  std::vector<std::string> terms;
  Eigen::MatrixXd source_coords;  // y_i, terms x 3
  Eigen::MatrixXd term_coords;    // x_hat_i, terms x 3
  std::vector<std::pair<std::string, ReferencePoint>> matched_terms;
  double fit_x2_raw = 0.0;
  double fit_x2_standardized = 0.0;
  ActProvenance provenance;

  std::optional<std::size_t> term_index(const std::string& term) const;
  /// Applies the stored transform to arbitrary 3-D rows.
  Eigen::MatrixXd transform(const Eigen::MatrixXd& rows) const;
};

/// Classical Procrustes (scale, orthogonal map with reflections, translation)
/// from a 3-D configuration to the matched reference terms padded with a
/// zero third coordinate.
ActModel procrustes_fit(const MdsEmbedding& embedding, const ReferenceSpace& reference);

/// Center of mass of the query's terms in the aligned space.
Eigen::Vector3d project_track(const ActModel& act, const SparseVector& q);

enum class MoodDimension { Valence, Arousal, Tension };

std::string_view to_string(MoodDimension d) noexcept;
std::optional<MoodDimension> parse_dimension(std::string_view name);
/// Unit axis of a mood dimension in the aligned space.
Eigen::Vector3d dimension_axis(MoodDimension d);

double predict_dimension(const Eigen::Vector3d& position, MoodDimension dimension);

/// Projection of a track position onto the unit direction of a term.
double predict_term(const ActModel& act, const Eigen::Vector3d& position, const std::string& term);

struct DimensionProxy {
  MoodDimension dimension;
  std::string term;
  double angle_degrees;
  std::size_t prevalence;
};

/// For each dimension, the sufficiently prevalent term whose aligned
/// position makes the smallest angle with the dimension axis.
std::vector<DimensionProxy> select_dimension_proxy(const ActModel& act,
                                                   const std::vector<std::size_t>& term_prevalence,
                                                   std::size_t num_tracks, double min_share);

struct ActOptions {
  Eigen::Index k = 16;
  MdsOptions mds;
};

/// Full pipelines: standard (SVD -> cosine -> MDS -> Procrustes), SVD-only
/// (rank-3 U S rows -> Procrustes) and MDS-only (raw TF-IDF cosine -> MDS ->
/// Procrustes).
ActModel act_fit(const TermDocMatrix& matrix, const ReferenceSpace& reference, ActVariant variant,
                 const ActOptions& opts);

}  // namespace act
