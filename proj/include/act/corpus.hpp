#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace act {

/// Sparse vector entry over a term index space.
struct SparseEntry {
  std::size_t index;
  double value;

  bool operator==(const SparseEntry&) const = default;
};

/// Entries are sorted by index and unique.
using SparseVector = std::vector<SparseEntry>;

Eigen::VectorXd to_dense(const SparseVector& v, std::size_t size);

struct VocabularyEntry {
  std::string term;
  std::vector<std::string> inflections;
};

/// Controlled vocabulary with inflected forms. Terms and inflections are
/// stored normalized; each form maps to exactly one canonical term.
class Vocabulary {
 public:
  struct Form {
    std::vector<std::string> words;
    std::size_t term;
  };

  Vocabulary() = default;
  explicit Vocabulary(std::vector<VocabularyEntry> entries);

  const std::vector<VocabularyEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::string& term(std::size_t i) const { return entries_[i].term; }
  std::optional<std::size_t> find(const std::string& term) const;

  /// Canonical term and inflections of every entry, as word sequences.
  const std::vector<Form>& forms() const noexcept { return forms_; }

  /// Sorted unique indices of the terms having a form that occurs in
  /// `words` as consecutive whole words.
  std::vector<std::size_t> terms_in(const std::vector<std::string>& words) const;

 private:
  std::vector<VocabularyEntry> entries_;
  std::vector<Form> forms_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::string, std::vector<std::size_t>> forms_by_first_word_;
};

struct Track {
  std::string track_id;
  std::string artist;
  std::string title;
};

struct TagAssignment {
  std::string track_id;
  std::string tag;
  int count = 0;
};

/// Raw tag-document data. Construction rejects assignments for unknown
/// tracks and merges duplicate (track, tag) rows by their maximum count;
/// tags are compared after normalization.
class TagCorpus {
 public:
  TagCorpus() = default;
  TagCorpus(std::vector<Track> tracks, std::vector<TagAssignment> assignments);

  const std::vector<Track>& tracks() const noexcept { return tracks_; }
  const std::vector<TagAssignment>& assignments() const noexcept { return assignments_; }
  /// Assignment indices per track, in track order.
  const std::vector<std::vector<std::size_t>>& by_track() const noexcept { return by_track_; }

 private:
  std::vector<Track> tracks_;
  std::vector<TagAssignment> assignments_;
  std::vector<std::vector<std::size_t>> by_track_;
};

struct TermAssociation {
  std::size_t track;
  std::size_t term;
  std::int64_t count;

  bool operator==(const TermAssociation&) const = default;
};

/// Term-level corpus: tag counts resolved onto vocabulary terms.
/// Associations are sorted by (track, term) and unique.
struct TermCorpus {
  std::vector<std::string> terms;
  std::vector<Track> tracks;
  std::vector<TermAssociation> associations;

  /// Number of distinct tracks per term.
  std::vector<std::size_t> prevalence() const;
  /// Number of distinct terms per track.
  std::vector<std::size_t> terms_per_track() const;

  bool operator==(const TermCorpus&) const;
};

/// Tags of a single track, as needed to vectorize it against a fitted model.
struct TrackTags {
  Track track;
  std::vector<std::pair<std::string, int>> tags;
};

/// Sparse TF-IDF term x track matrix together with the statistics needed to
/// weight unseen tracks consistently (document frequencies and track count).
class TermDocMatrix {
 public:
  using Sparse = Eigen::SparseMatrix<double, Eigen::ColMajor>;

  TermDocMatrix() = default;
  /// Validates the invariants: positive weights, doc_freq matching the
  /// stored pattern and num_tracks == |track_ids|.
  TermDocMatrix(std::vector<std::string> terms, std::vector<std::string> track_ids,
                Sparse cells, std::vector<std::size_t> doc_freq, std::size_t num_tracks);

  /// Wraps an arbitrary non-negative dense matrix; document frequencies are
  /// taken from its non-zero pattern. Mostly useful for synthetic inputs.
  static TermDocMatrix from_dense(const Eigen::MatrixXd& dense);

  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<std::string>& track_ids() const noexcept { return track_ids_; }
  const std::vector<std::size_t>& doc_freq() const noexcept { return doc_freq_; }
  std::size_t num_tracks() const noexcept { return num_tracks_; }
  std::size_t num_terms() const noexcept { return terms_.size(); }
  const Sparse& cells() const noexcept { return cells_; }

  Eigen::MatrixXd dense() const;
  SparseVector column(std::size_t track) const;
  std::optional<std::size_t> term_index(const std::string& term) const;

  /// Weight of `count` for term i under this matrix's idf statistics.
  double weight(std::size_t term, std::int64_t count) const;

 private:
  std::vector<std::string> terms_;
  std::vector<std::string> track_ids_;
  Sparse cells_;
  std::vector<std::size_t> doc_freq_;
  std::size_t num_tracks_ = 0;
  std::unordered_map<std::string, std::size_t> term_index_;
};

/// Resolves tags onto vocabulary terms. A tag matches a term when any form
/// of the term appears in it as whole consecutive words. Matches whose term
/// also appears as whole words in the track's title or artist are dropped.
/// Several tags matching the same (track, term) add their counts.
TermCorpus match_terms(const TagCorpus& corpus, const Vocabulary& vocab);

/// Term counts for one track, keyed by vocabulary index.
std::vector<std::pair<std::size_t, std::int64_t>> match_track(
    const Track& track, const std::vector<std::pair<std::string, int>>& tags,
    const Vocabulary& vocab);

/// Removes rare terms and sparsely tagged tracks, alternating both passes
/// until neither removes anything.
TermCorpus filter_corpus(const TermCorpus& corpus, std::size_t min_term_prevalence,
                         std::size_t min_terms_per_track);

/// (n + 1) * ln(R / f) for every stored association. Terms without any
/// association are dropped first; a term present in every track is an error.
TermDocMatrix build_tfidf(const TermCorpus& corpus);

/// Query vector of an unseen track over the matrix's terms.
SparseVector vectorize_track(const TrackTags& tags, const Vocabulary& vocab,
                             const TermDocMatrix& matrix);

/// Query vector from already-matched term counts (term names, raw counts).
SparseVector vectorize_counts(const std::vector<std::pair<std::string, std::int64_t>>& counts,
                              const TermDocMatrix& matrix);

// TSV readers. Both expect the documented header line.
Vocabulary read_vocabulary(std::istream& in);
TagCorpus read_tag_corpus(std::istream& in);
/// Groups a tag corpus by track for vectorization.
std::vector<TrackTags> group_tracks(const TagCorpus& corpus);

}  // namespace act
