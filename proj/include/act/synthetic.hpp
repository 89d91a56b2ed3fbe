#pragma once

// Planted valence-arousal corpora: terms with known mood positions and
// tracks tagged by terms near a known track mood. Used by the tests, the
// acceptance suite and the shipped example data.

#include "act/corpus.hpp"
#include "act/eval.hpp"
#include "act/moodspace.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace act::synthetic {

struct Options {
  std::size_t num_terms = 30;
  std::size_t num_train_tracks = 2000;
  std::size_t num_test_tracks = 300;
  std::size_t min_terms = 2;
  std::size_t max_terms = 8;
  double bandwidth = 0.45;  // decay length of the tagging probability in VA units
  std::size_t num_anchors = 15;
  std::size_t num_raters = 6;
  double rater_noise = 0.6;
  std::uint64_t seed = 7;
};

struct PlantedTrack {
  TrackTags tags;
  Eigen::Vector2d mood;  // valence, arousal
};

struct Benchmark {
  std::vector<VocabularyEntry> vocabulary;
  Eigen::MatrixXd term_va;  // num_terms x 2
  std::vector<PlantedTrack> train;
  std::vector<PlantedTrack> test;
  ReferenceSpace anchors;
  std::vector<Rating> ratings;  // test tracks, valence/arousal/tension
};

Benchmark make_benchmark(const Options& opts);

TagCorpus to_tag_corpus(const std::vector<PlantedTrack>& tracks);

void write_vocabulary(std::ostream& out, const std::vector<VocabularyEntry>& vocab);
void write_corpus(std::ostream& out, const std::vector<PlantedTrack>& tracks);
void write_reference(std::ostream& out, const ReferenceSpace& reference);
void write_ratings(std::ostream& out, const std::vector<Rating>& ratings);

}  // namespace act::synthetic
