#include "act/error.hpp"
#include "act/eval.hpp"

#include <algorithm>
#include <numeric>

namespace act {

std::size_t TestCorpus::total() const {
  std::size_t n = 0;
  for (const auto& a : associations) n += a.size();
  return n;
}

double TestCorpus::mean_terms_per_track() const {
  return track_ids.empty() ? 0.0 : static_cast<double>(total()) / static_cast<double>(track_ids.size());
}

TestCorpus make_test_corpus(const std::vector<TrackTags>& tracks, const Vocabulary& vocab,
                            const TermDocMatrix& matrix) {
  TestCorpus out;
  for (const auto& t : tracks) {
    std::vector<std::pair<std::string, std::int64_t>> assoc;
    for (auto [term, count] : match_track(t.track, t.tags, vocab))
      if (matrix.term_index(vocab.term(term))) assoc.emplace_back(vocab.term(term), count);
    if (assoc.empty())
      throw Error(ErrorCode::EmptyQuery, "test track '" + t.track.track_id + "' matches no model term");
    out.track_ids.push_back(t.track.track_id);
    out.associations.push_back(std::move(assoc));
  }
  return out;
}

bool remove_one_association(TestCorpus& corpus, Rng& rng) {
  std::vector<double> track_weights(corpus.associations.size(), 0.0);
  bool any = false;
  for (std::size_t t = 0; t < corpus.associations.size(); ++t) {
    const auto n = corpus.associations[t].size();
    if (n >= 2) {
      track_weights[t] = static_cast<double>(n);
      any = true;
    }
  }
  if (!any) return false;
  const auto track = std::discrete_distribution<std::size_t>(track_weights.begin(), track_weights.end())(rng);

  auto& assoc = corpus.associations[track];
  std::vector<double> weights;
  weights.reserve(assoc.size());
  for (const auto& [_, count] : assoc) weights.push_back(1.0 / static_cast<double>(std::max<std::int64_t>(count, 1)));
  const auto victim = std::discrete_distribution<std::size_t>(weights.begin(), weights.end())(rng);
  assoc.erase(assoc.begin() + static_cast<std::ptrdiff_t>(victim));
  return true;
}

AblationReport ablate_sparsity(const TestCorpus& corpus, const std::vector<Predictor>& predictors,
                               const RatingsTable& ratings, const AblationOptions& opts) {
  if (predictors.empty()) throw Error(ErrorCode::Parameter, "ablation: no predictors");
  if (opts.runs < 1) throw Error(ErrorCode::Parameter, "ablation: runs must be at least 1");
  if (opts.levels.empty()) throw Error(ErrorCode::Parameter, "ablation: no levels");
  for (const auto& a : corpus.associations)
    if (a.empty()) throw Error(ErrorCode::Parameter, "ablation: every test track needs an association");
  if (std::all_of(corpus.associations.begin(), corpus.associations.end(), [](const auto& a) { return a.size() < 2; }))
    throw Error(ErrorCode::NothingToAblate, "ablation: every track already has a single term");

  std::vector<int> levels = opts.levels;
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (levels.back() < 1) throw Error(ErrorCode::Parameter, "ablation: levels must be at least 1");

  AblationReport report;
  report.per_run.resize(static_cast<std::size_t>(opts.runs));
  const auto num_tracks = corpus.track_ids.size();

  for (int run = 0; run < opts.runs; ++run) {
    Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(run)));
    TestCorpus current = corpus;
    std::size_t total = current.total();
    auto& out = report.per_run[static_cast<std::size_t>(run)];

    std::map<std::string, std::vector<double>> cached;
    std::size_t cached_total = 0;
    for (int level : levels) {
      // Integer comparison of total/num_tracks <= level.
      while (total > static_cast<std::size_t>(level) * num_tracks) {
        if (!remove_one_association(current, rng)) break;
        --total;
      }
      if (cached.empty() || cached_total != total) {
        cached.clear();
        for (const auto& predict : predictors)
          for (const auto& row : evaluate_predictions(predict(current), ratings, "", "").rows)
            cached[row.scale].push_back(row.rho);
        cached_total = total;
      }
      out[level] = cached;
    }
  }

  for (int level : levels) {
    std::map<std::string, std::vector<double>> per_predictor_mean;
    for (const auto& [scale, first] : report.per_run.front().at(level)) {
      std::vector<double> means;
      for (std::size_t p = 0; p < first.size(); ++p) {
        double sum = 0.0;
        for (const auto& run : report.per_run) sum += run.at(level).at(scale).at(p);
        means.push_back(sum / static_cast<double>(opts.runs));
      }
      report.rows.push_back({level, scale, median(means), opts.runs});
    }
  }
  return report;
}

}  // namespace act
