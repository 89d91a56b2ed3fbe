#include "act/corpus.hpp"
#include "act/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

using namespace act;

namespace {

Vocabulary mood_vocab() {
  return Vocabulary({{"happy", {"happiness"}}, {"sad", {}}, {"hard rock", {}}, {"calm", {"calmness"}}});
}

TagCorpus one_track(const std::string& title, std::vector<std::pair<std::string, int>> tags,
                    const std::string& artist = "Someone") {
  std::vector<TagAssignment> rows;
  for (auto& [tag, count] : tags) rows.push_back({"t1", tag, count});
  return TagCorpus({{"t1", artist, title}}, rows);
}

std::vector<TermAssociation> assoc(const TermCorpus& c) { return c.associations; }

/// Random term corpus with `tracks` tracks over `terms` terms.
TermCorpus random_corpus(std::mt19937_64& rng, std::size_t terms, std::size_t tracks, double density) {
  TermCorpus c;
  for (std::size_t i = 0; i < terms; ++i) c.terms.push_back("w" + std::to_string(i));
  for (std::size_t j = 0; j < tracks; ++j) c.tracks.push_back({"t" + std::to_string(j), "", ""});
  std::bernoulli_distribution keep(density);
  std::uniform_int_distribution<int> count(0, 100);
  for (std::size_t j = 0; j < tracks; ++j)
    for (std::size_t i = 0; i < terms; ++i)
      if (keep(rng)) c.associations.push_back({j, i, count(rng)});
  return c;
}

/// The conditions a filtered corpus must satisfy, checked from scratch.
bool satisfies_thresholds(const TermCorpus& c, std::size_t min_prev, std::size_t min_terms) {
  std::vector<std::size_t> prev(c.terms.size(), 0), per(c.tracks.size(), 0);
  for (const auto& a : c.associations) {
    ++prev[a.term];
    ++per[a.track];
  }
  for (auto p : prev)
    if (p < min_prev) return false;
  for (auto p : per)
    if (p < min_terms) return false;
  return true;
}

}  // namespace

TEST(Vocabulary, NormalizesAndRejectsDuplicates) {
  Vocabulary v(std::vector<VocabularyEntry>{{"  Happy ", {"HAPPINESS"}}});
  EXPECT_EQ(v.term(0), "happy");
  EXPECT_EQ(v.find("happy"), 0u);
  EXPECT_THROW(Vocabulary({{"happy", {}}, {"HAPPY", {}}}), Error);
  EXPECT_THROW(Vocabulary({{"happy", {"joy"}}, {"glad", {"joy"}}}), Error);
  EXPECT_THROW(Vocabulary(std::vector<VocabularyEntry>{{"", {}}}), Error);
}

TEST(MatchTerms, WholeWordContainment) {
  auto v = mood_vocab();
  auto c = match_terms(one_track("Song", {{"happy hardcore", 10}}), v);
  ASSERT_EQ(c.associations.size(), 1u);
  EXPECT_EQ(c.terms[c.associations[0].term], "happy");

  EXPECT_TRUE(match_terms(one_track("Song", {{"unhappy", 10}}), v).associations.empty());
  EXPECT_TRUE(match_terms(one_track("Song", {{"hard", 10}}), v).associations.empty());
  auto phrase = match_terms(one_track("Song", {{"classic hard-rock anthem", 3}}), v);
  ASSERT_EQ(phrase.associations.size(), 1u);
  EXPECT_EQ(phrase.terms[phrase.associations[0].term], "hard rock");
}

TEST(MatchTerms, DropsTermsInTitleOrArtist) {
  auto v = mood_vocab();
  EXPECT_TRUE(match_terms(one_track("Happy", {{"happy", 50}}), v).associations.empty());
  EXPECT_TRUE(match_terms(one_track("Song", {{"sad", 50}}, "The Sad Ones"), v).associations.empty());
  EXPECT_EQ(match_terms(one_track("Unhappy Song", {{"happy", 50}}), v).associations.size(), 1u);
}

TEST(MatchTerms, InflectionsAndMergeBySum) {
  auto v = mood_vocab();
  auto c = match_terms(one_track("Song", {{"happy", 3}, {"happy mood", 2}, {"Happiness", 4}}), v);
  ASSERT_EQ(c.associations.size(), 1u);
  EXPECT_EQ(c.associations[0].count, 9);
}

TEST(MatchTerms, CaseAndWhitespaceInsensitive) {
  auto v = mood_vocab();
  auto a = match_terms(one_track("Song", {{"happy", 7}, {"calm", 2}}), v);
  auto b = match_terms(one_track("Song", {{"  HAPPY\t", 7}, {"Calm  ", 2}}), v);
  EXPECT_EQ(assoc(a), assoc(b));
}

TEST(MatchTerms, DuplicateTagRowsMergeByMax) {
  auto v = mood_vocab();
  auto c = match_terms(one_track("Song", {{"sad", 3}, {"sad", 8}, {"Sad", 5}}), v);
  ASSERT_EQ(c.associations.size(), 1u);
  EXPECT_EQ(c.associations[0].count, 8);
}

TEST(MatchTerms, EmptyVocabularyIsConfigurationError) {
  try {
    match_terms(one_track("Song", {{"sad", 3}}), Vocabulary{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Configuration);
  }
}

TEST(TagCorpus, RejectsUnknownTrack) {
  EXPECT_THROW(TagCorpus({{"a", "", ""}}, {{"b", "sad", 1}}), Error);
}

TEST(FilterCorpus, RemovesRareTerm) {
  TermCorpus c;
  c.terms = {"solemn", "happy", "sad"};
  for (std::size_t j = 0; j < 120; ++j) {
    c.tracks.push_back({"t" + std::to_string(j), "", ""});
    if (j < 99) c.associations.push_back({j, 0, 10});
    c.associations.push_back({j, 1, 10});
    c.associations.push_back({j, 2, 10});
  }
  auto f = filter_corpus(c, 100, 2);
  EXPECT_EQ(f.terms, (std::vector<std::string>{"happy", "sad"}));
  EXPECT_EQ(f.tracks.size(), 120u);
}

TEST(FilterCorpus, ZeroThresholdsAreNoOp) {
  std::mt19937_64 rng(3);
  auto c = random_corpus(rng, 6, 20, 0.4);
  EXPECT_EQ(filter_corpus(c, 0, 0), c);
}

TEST(FilterCorpus, CascadeReachesFixedPoint) {
  // t0: {a, b}, t1: {a, b}, t2: {b, c}. Term c (prevalence 1) goes, which
  // leaves t2 with one term; dropping t2 brings b down to 2, still fine.
  TermCorpus c;
  c.terms = {"a", "b", "c"};
  c.tracks = {{"t0", "", ""}, {"t1", "", ""}, {"t2", "", ""}};
  c.associations = {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}, {2, 1, 1}, {2, 2, 1}};
  auto f = filter_corpus(c, 2, 2);
  EXPECT_EQ(f.terms, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(f.tracks.size(), 2u);
  EXPECT_EQ(f.tracks[1].track_id, "t1");
  EXPECT_TRUE(satisfies_thresholds(f, 2, 2));
}

TEST(FilterCorpus, EmptyResultIsError) {
  TermCorpus c;
  c.terms = {"a"};
  c.tracks = {{"t0", "", ""}};
  c.associations = {{0, 0, 1}};
  try {
    filter_corpus(c, 5, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyCorpus);
  }
}

TEST(FilterCorpus, RandomizedProperties) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto c = random_corpus(rng, 8, 25, 0.3);
    const std::size_t p = rng() % 6, m = rng() % 4;
    TermCorpus f;
    try {
      f = filter_corpus(c, p, m);
    } catch (const Error&) {
      continue;
    }
    EXPECT_TRUE(satisfies_thresholds(f, p, m));
    EXPECT_EQ(filter_corpus(f, p, m), f);  // idempotent

    // Raising the prevalence threshold never adds terms.
    try {
      auto g = filter_corpus(c, p + 1, m);
      std::set<std::string> fs(f.terms.begin(), f.terms.end());
      for (const auto& t : g.terms) EXPECT_TRUE(fs.count(t)) << t;
    } catch (const Error&) {
    }
  }
}

TEST(BuildTfidf, HandValues) {
  // 100 tracks; term 0 on 10 of them; term 1 on 50.
  TermCorpus c;
  c.terms = {"x", "y"};
  for (std::size_t j = 0; j < 100; ++j) {
    c.tracks.push_back({"t" + std::to_string(j), "", ""});
    if (j < 10) c.associations.push_back({j, 0, j == 0 ? 4 : 0});
    if (j < 50) c.associations.push_back({j, 1, 1});
  }
  auto m = build_tfidf(c);
  const auto d = m.dense();
  EXPECT_NEAR(d(0, 0), 11.512925464970229, 1e-12);
  EXPECT_NEAR(d(0, 1), 2.302585092994046, 1e-12);
  EXPECT_NEAR(d(1, 0), 2.0 * std::log(2.0), 1e-12);
  EXPECT_EQ(m.doc_freq(), (std::vector<std::size_t>{10, 50}));
  EXPECT_EQ(m.num_tracks(), 100u);
}

TEST(BuildTfidf, TermInEveryTrackIsDegenerate) {
  TermCorpus c;
  c.terms = {"x"};
  c.tracks = {{"a", "", ""}, {"b", "", ""}};
  c.associations = {{0, 0, 1}, {1, 0, 2}};
  try {
    build_tfidf(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateTerm);
  }
}

TEST(BuildTfidf, PositiveAndConsistentWithDocFreq) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto c = random_corpus(rng, 6, 30, 0.3);
    TermDocMatrix m;
    try {
      m = build_tfidf(c);
    } catch (const Error&) {
      continue;
    }
    const auto d = m.dense();
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
      std::size_t nz = 0;
      for (Eigen::Index j = 0; j < d.cols(); ++j)
        if (d(i, j) != 0.0) {
          EXPECT_GT(d(i, j), 0.0);
          ++nz;
        }
      EXPECT_EQ(nz, m.doc_freq()[i]);
    }
  }
}

TEST(Vectorize, HandValueAndMerge) {
  // R = 100, f_happy = 10.
  TermCorpus c;
  c.terms = {"happy", "sad"};
  for (std::size_t j = 0; j < 100; ++j) {
    c.tracks.push_back({"t" + std::to_string(j), "", ""});
    if (j < 10) c.associations.push_back({j, 0, 1});
    if (j < 60) c.associations.push_back({j, 1, 1});
  }
  auto m = build_tfidf(c);
  auto v = mood_vocab();
  TrackTags tt{{"q", "A", "B"}, {{"happy", 50}}};
  auto q = vectorize_track(tt, v, m);
  ASSERT_EQ(q.size(), 1u);
  EXPECT_NEAR(q[0].value, 51.0 * std::log(10.0), 1e-12);

  TrackTags merged{{"q", "A", "B"}, {{"happy", 3}, {"happy mood", 2}}};
  auto q2 = vectorize_track(merged, v, m);
  ASSERT_EQ(q2.size(), 1u);
  EXPECT_NEAR(q2[0].value, 6.0 * std::log(10.0), 1e-12);

  TrackTags none{{"q", "A", "B"}, {{"polka", 3}}};
  try {
    vectorize_track(none, v, m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyQuery);
    EXPECT_EQ(e.token(), "empty-query");
  }
}

TEST(Vectorize, TrainingTrackReproducesColumn) {
  Vocabulary v({{"happy", {}}, {"sad", {}}, {"calm", {}}, {"dark", {}}});
  std::mt19937_64 rng(9);
  std::vector<Track> tracks;
  std::vector<TagAssignment> rows;
  const char* tags[] = {"happy", "sad", "calm", "dark", "very dark", "calm sad"};
  for (int j = 0; j < 40; ++j) {
    tracks.push_back({"t" + std::to_string(j), "X", "Y"});
    for (const char* tag : tags)
      if (rng() % 3 == 0) rows.push_back({tracks.back().track_id, tag, static_cast<int>(rng() % 101)});
  }
  TagCorpus corpus(tracks, rows);
  auto m = build_tfidf(filter_corpus(match_terms(corpus, v), 1, 1));
  auto grouped = group_tracks(corpus);
  for (std::size_t j = 0; j < m.num_tracks(); ++j) {
    auto it = std::find_if(grouped.begin(), grouped.end(),
                           [&](const TrackTags& t) { return t.track.track_id == m.track_ids()[j]; });
    ASSERT_NE(it, grouped.end());
    EXPECT_EQ(vectorize_track(*it, v, m), m.column(j));
  }
}

TEST(Readers, ParseAndValidate) {
  std::istringstream vocab("term\tinflections\nhappy\thappiness,happier\nsad\t\n");
  auto v = read_vocabulary(vocab);
  EXPECT_EQ(v.size(), 2u);

  std::istringstream corpus("track_id\tartist\ttitle\ttag\tcount\nt1\tA\tB\thappy\t10\nt1\tA\tB\tsad\t0\n");
  auto c = read_tag_corpus(corpus);
  EXPECT_EQ(c.tracks().size(), 1u);
  EXPECT_EQ(c.assignments().size(), 2u);

  std::istringstream bad_count("track_id\tartist\ttitle\ttag\tcount\nt1\tA\tB\thappy\t101\n");
  EXPECT_THROW(read_tag_corpus(bad_count), Error);
  std::istringstream bad_header("id\tartist\ttitle\ttag\tcount\n");
  EXPECT_THROW(read_tag_corpus(bad_header), Error);
}
