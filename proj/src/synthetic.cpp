#include "act/synthetic.hpp"

#include "act/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace act::synthetic {

namespace {

constexpr std::array<const char*, 40> kWords = {
    "happy",   "joyful",   "cheerful", "upbeat",   "fun",      "party",     "energetic", "excited",
    "wild",    "aggressive", "angry",  "brutal",   "tense",    "anxious",   "nervous",   "dark",
    "gloomy",  "sad",      "melancholy", "depressing", "sombre", "lonely",  "calm",      "peaceful",
    "relaxing", "mellow",  "chill",    "serene",   "dreamy",   "soothing",  "romantic",  "tender",
    "warm",    "bright",   "playful",  "stormy",   "haunting", "bittersweet", "hopeful", "quiet"};

std::string format_value(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

PlantedTrack make_track(const std::string& id, const Eigen::MatrixXd& term_va,
                        const std::vector<VocabularyEntry>& vocab, const Options& opts, Rng& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  PlantedTrack t;
  t.mood = {unit(rng), unit(rng)};
  t.tags.track = {id, "Artist " + id, "Track " + id};

  const auto n = static_cast<std::size_t>(term_va.rows());
  std::vector<double> affinity(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d2 = (term_va.row(static_cast<Eigen::Index>(i)).transpose() - t.mood).squaredNorm();
    affinity[i] = std::exp(-d2 / (2.0 * opts.bandwidth * opts.bandwidth));
  }

  const auto count =
      std::uniform_int_distribution<std::size_t>(opts.min_terms, std::min(opts.max_terms, n))(rng);
  std::vector<double> weights = affinity;
  std::vector<std::size_t> chosen;
  for (std::size_t c = 0; c < count; ++c) {
    const auto pick = std::discrete_distribution<std::size_t>(weights.begin(), weights.end())(rng);
    chosen.push_back(pick);
    weights[pick] = 0.0;
  }
  double top = 0.0;
  for (auto i : chosen) top = std::max(top, affinity[i]);

  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (auto i : chosen) {
    const int raw = static_cast<int>(std::lround(100.0 * affinity[i] / top));
    std::string tag = vocab[i].term;
    const double style = u01(rng);
    if (style < 0.15 && !vocab[i].inflections.empty())
      tag = vocab[i].inflections.front();
    else if (style < 0.3)
      tag += " music";
    t.tags.tags.emplace_back(tag, std::clamp(raw, 0, 100));
  }
  return t;
}

}  // namespace

Benchmark make_benchmark(const Options& opts) {
  Benchmark b;
  Rng rng(opts.seed);
  const std::size_t n = std::min(opts.num_terms, kWords.size());

  // Terms spread around the circumplex with jittered angle and radius.
  b.term_va.resize(static_cast<Eigen::Index>(n), 2);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5), radius(0.45, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = 2.0 * std::numbers::pi * (static_cast<double>(i) + 0.6 * jitter(rng)) /
                         static_cast<double>(n);
    const double r = radius(rng);
    b.term_va(static_cast<Eigen::Index>(i), 0) = r * std::cos(angle);
    b.term_va(static_cast<Eigen::Index>(i), 1) = r * std::sin(angle);
    VocabularyEntry e{kWords[i], {}};
    if (i % 5 == 0) e.inflections.push_back(std::string(kWords[i]) + "ness");
    b.vocabulary.push_back(std::move(e));
  }

  for (std::size_t j = 0; j < opts.num_train_tracks; ++j) {
    std::ostringstream id;
    id << "tr" << std::setw(5) << std::setfill('0') << j;
    b.train.push_back(make_track(id.str(), b.term_va, b.vocabulary, opts, rng));
  }
  for (std::size_t j = 0; j < opts.num_test_tracks; ++j) {
    std::ostringstream id;
    id << "te" << std::setw(5) << std::setfill('0') << j;
    b.test.push_back(make_track(id.str(), b.term_va, b.vocabulary, opts, rng));
  }

  b.anchors = ReferenceSpace("synthetic planted positions");
  const std::size_t stride = std::max<std::size_t>(1, n / std::max<std::size_t>(1, opts.num_anchors));
  for (std::size_t i = 0, added = 0; i < n && added < opts.num_anchors; i += stride, ++added)
    b.anchors.add(b.vocabulary[i].term, {b.term_va(static_cast<Eigen::Index>(i), 0),
                                         b.term_va(static_cast<Eigen::Index>(i), 1)});

  std::normal_distribution<double> noise(0.0, opts.rater_noise);
  auto likert = [](double x) { return std::clamp(std::round(5.0 + 4.0 * x), 1.0, 9.0); };
  for (const auto& t : b.test) {
    const double v = t.mood(0), a = t.mood(1);
    const double tension = (a - v) / std::numbers::sqrt2;
    for (std::size_t r = 0; r < opts.num_raters; ++r) {
      const std::string rater = "r" + std::to_string(r);
      b.ratings.push_back({t.tags.track.track_id, rater, "valence", likert(v + noise(rng) / 4.0)});
      b.ratings.push_back({t.tags.track.track_id, rater, "arousal", likert(a + noise(rng) / 4.0)});
      b.ratings.push_back({t.tags.track.track_id, rater, "tension", likert(tension + noise(rng) / 4.0)});
    }
  }
  return b;
}

TagCorpus to_tag_corpus(const std::vector<PlantedTrack>& tracks) {
  std::vector<Track> ts;
  std::vector<TagAssignment> assignments;
  for (const auto& t : tracks) {
    ts.push_back(t.tags.track);
    for (const auto& [tag, count] : t.tags.tags) assignments.push_back({t.tags.track.track_id, tag, count});
  }
  return TagCorpus(std::move(ts), std::move(assignments));
}

void write_vocabulary(std::ostream& out, const std::vector<VocabularyEntry>& vocab) {
  out << "term\tinflections\n";
  for (const auto& e : vocab) {
    out << e.term << '\t';
    for (std::size_t i = 0; i < e.inflections.size(); ++i) out << (i ? "," : "") << e.inflections[i];
    out << '\n';
  }
}

void write_corpus(std::ostream& out, const std::vector<PlantedTrack>& tracks) {
  out << "track_id\tartist\ttitle\ttag\tcount\n";
  for (const auto& t : tracks)
    for (const auto& [tag, count] : t.tags.tags)
      out << t.tags.track.track_id << '\t' << t.tags.track.artist << '\t' << t.tags.track.title << '\t' << tag
          << '\t' << count << '\n';
}

void write_reference(std::ostream& out, const ReferenceSpace& reference) {
  out << "term\tvalence\tarousal\n";
  for (const auto& [term, p] : reference.entries())
    out << term << '\t' << format_value(p.valence) << '\t' << format_value(p.arousal) << '\n';
}

void write_ratings(std::ostream& out, const std::vector<Rating>& ratings) {
  out << "track_id\trater_id\tscale\tvalue\n";
  for (const auto& r : ratings)
    out << r.track_id << '\t' << r.rater_id << '\t' << r.scale << '\t' << format_value(r.value) << '\n';
}

}  // namespace act::synthetic
