#pragma once

#include "act/corpus.hpp"
#include "act/random.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace act {

/// Pearson correlation of average (fractional) ranks.
double spearman_rho(std::span<const double> x, std::span<const double> y);

/// Average ranks (1-based); ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

/// Cronbach's alpha with raters as test parts and items (tracks) as
/// observations: rows are raters, columns items. Raters with any NaN
/// (missing) rating are dropped before computing.
double cronbach_alpha(const Eigen::MatrixXd& ratings);

struct Rating {
  std::string track_id;
  std::string rater_id;
  std::string scale;
  double value;
};

/// Listener ratings on nine-point scales and their per-track means.
class RatingsTable {
 public:
  static constexpr double kMin = 1.0;
  static constexpr double kMax = 9.0;

  RatingsTable() = default;
  explicit RatingsTable(std::vector<Rating> rows);

  const std::vector<Rating>& rows() const noexcept { return rows_; }
  const std::vector<std::string>& scales() const noexcept { return scales_; }
  /// scale -> track -> mean over raters.
  const std::map<std::string, std::map<std::string, double>>& aggregated() const noexcept {
    return aggregated_;
  }
  /// raters x tracks matrix for one scale, NaN where a rating is missing.
  Eigen::MatrixXd rater_matrix(const std::string& scale) const;

 private:
  std::vector<Rating> rows_;
  std::vector<std::string> scales_;
  std::map<std::string, std::map<std::string, double>> aggregated_;
};

RatingsTable read_ratings(std::istream& in);

/// scale -> track -> predicted value.
using ScalePredictions = std::map<std::string, std::map<std::string, double>>;

struct ReportRow {
  std::string scale;
  std::string method;
  std::string k;
  double rho;
  std::size_t n;
};

struct PredictionReport {
  std::vector<ReportRow> rows;
  std::map<std::string, std::string> metadata;
};

/// Joins predictions with aggregated ratings per scale and correlates them.
/// Only scales present in both are evaluated.
PredictionReport evaluate_predictions(const ScalePredictions& predictions, const RatingsTable& ratings,
                                      const std::string& method, const std::string& k);

// Sparsity ablation ----------------------------------------------------------

/// Raw per-track term counts of a test set; counts keyed by term name.
struct TestCorpus {
  std::vector<std::string> track_ids;
  std::vector<std::vector<std::pair<std::string, std::int64_t>>> associations;

  std::size_t total() const;
  double mean_terms_per_track() const;
};

/// Matches raw tags and keeps the terms known to `matrix`. A track left
/// without any model term is an empty-query error.
TestCorpus make_test_corpus(const std::vector<TrackTags>& tracks, const Vocabulary& vocab,
                            const TermDocMatrix& matrix);

/// Produces predictions for every scale from a (possibly thinned) corpus.
using Predictor = std::function<ScalePredictions(const TestCorpus&)>;

struct AblationOptions {
  std::vector<int> levels{8, 7, 6, 5, 4, 3, 2, 1};
  int runs = 10;
  std::uint64_t seed = 0;
};

struct AblationRow {
  int level;
  std::string scale;
  double rho_median;  // median across predictors of the run-mean rho
  int runs;
};

struct AblationReport {
  std::vector<AblationRow> rows;
  /// per_run[run][level][scale][predictor] -> rho
  std::vector<std::map<int, std::map<std::string, std::vector<double>>>> per_run;
};

/// Removes one association at a time (track chosen proportionally to its
/// association count, association inversely proportional to its raw count,
/// no track below one association) and evaluates every predictor when the
/// corpus-wide mean terms per track first reaches each level.
AblationReport ablate_sparsity(const TestCorpus& corpus, const std::vector<Predictor>& predictors,
                               const RatingsTable& ratings, const AblationOptions& opts);

/// One removal step; returns false when every track is down to one term.
bool remove_one_association(TestCorpus& corpus, Rng& rng);

double median(std::vector<double> values);

}  // namespace act
