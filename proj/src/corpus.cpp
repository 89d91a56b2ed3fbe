#include "act/corpus.hpp"

#include "act/error.hpp"
#include "act/text.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace act {

Eigen::VectorXd to_dense(const SparseVector& v, std::size_t size) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size));
  for (const auto& e : v) {
    if (e.index >= size) throw Error(ErrorCode::Parameter, "sparse index out of range");
    out(static_cast<Eigen::Index>(e.index)) = e.value;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary::Vocabulary(std::vector<VocabularyEntry> entries) {
  std::unordered_map<std::string, std::size_t> form_owner;
  for (auto& raw : entries) {
    VocabularyEntry entry;
    entry.term = text::normalize(raw.term);
    if (entry.term.empty())
      throw Error(ErrorCode::Configuration, "vocabulary term '" + raw.term + "' is empty after normalization");
    if (index_.count(entry.term))
      throw Error(ErrorCode::Configuration, "duplicate vocabulary term '" + entry.term + "'");
    const std::size_t id = entries_.size();
    index_.emplace(entry.term, id);

    std::vector<std::string> forms{entry.term};
    for (const auto& infl : raw.inflections) {
      auto norm = text::normalize(infl);
      if (norm.empty() || std::find(forms.begin(), forms.end(), norm) != forms.end()) continue;
      forms.push_back(norm);
      entry.inflections.push_back(norm);
    }
    for (const auto& f : forms) {
      auto [it, inserted] = form_owner.emplace(f, id);
      if (!inserted && it->second != id)
        throw Error(ErrorCode::Configuration,
                    "form '" + f + "' maps to both '" + entries_[it->second].term + "' and '" + entry.term + "'");
      forms_.push_back(Form{text::words(f), id});
    }
    entries_.push_back(std::move(entry));
  }
  for (std::size_t f = 0; f < forms_.size(); ++f)
    forms_by_first_word_[forms_[f].words.front()].push_back(f);
}

std::optional<std::size_t> Vocabulary::find(const std::string& term) const {
  auto it = index_.find(text::normalize(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> Vocabulary::terms_in(const std::vector<std::string>& words) const {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < words.size(); ++p) {
    auto it = forms_by_first_word_.find(words[p]);
    if (it == forms_by_first_word_.end()) continue;
    for (auto f : it->second) {
      const auto& fw = forms_[f].words;
      if (p + fw.size() > words.size()) continue;
      if (std::equal(fw.begin(), fw.end(), words.begin() + static_cast<std::ptrdiff_t>(p)))
        out.push_back(forms_[f].term);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// TagCorpus

TagCorpus::TagCorpus(std::vector<Track> tracks, std::vector<TagAssignment> assignments)
    : tracks_(std::move(tracks)) {
  std::unordered_map<std::string, std::size_t> track_index;
  for (std::size_t t = 0; t < tracks_.size(); ++t) {
    if (!track_index.emplace(tracks_[t].track_id, t).second)
      throw Error(ErrorCode::Schema, "duplicate track '" + tracks_[t].track_id + "'");
  }
  by_track_.resize(tracks_.size());
  // (track, normalized tag) -> position in assignments_
  std::map<std::pair<std::size_t, std::string>, std::size_t> seen;
  for (auto& a : assignments) {
    auto it = track_index.find(a.track_id);
    if (it == track_index.end())
      throw Error(ErrorCode::Schema, "assignment references unknown track '" + a.track_id + "'");
    if (a.count < 0)
      throw Error(ErrorCode::Schema, "negative count for track '" + a.track_id + "'");
    auto key = std::make_pair(it->second, text::normalize(a.tag));
    auto [pos, inserted] = seen.emplace(key, assignments_.size());
    if (!inserted) {
      auto& kept = assignments_[pos->second];
      kept.count = std::max(kept.count, a.count);
      continue;
    }
    by_track_[it->second].push_back(assignments_.size());
    assignments_.push_back(std::move(a));
  }
}

// ---------------------------------------------------------------------------
// TermCorpus

std::vector<std::size_t> TermCorpus::prevalence() const {
  std::vector<std::size_t> out(terms.size(), 0);
  for (const auto& a : associations) ++out[a.term];
  return out;
}

std::vector<std::size_t> TermCorpus::terms_per_track() const {
  std::vector<std::size_t> out(tracks.size(), 0);
  for (const auto& a : associations) ++out[a.track];
  return out;
}

bool TermCorpus::operator==(const TermCorpus& other) const {
  if (terms != other.terms || associations != other.associations) return false;
  if (tracks.size() != other.tracks.size()) return false;
  for (std::size_t t = 0; t < tracks.size(); ++t)
    if (tracks[t].track_id != other.tracks[t].track_id) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Matching

std::vector<std::pair<std::size_t, std::int64_t>> match_track(
    const Track& track, const std::vector<std::pair<std::string, int>>& tags,
    const Vocabulary& vocab) {
  if (vocab.empty()) throw Error(ErrorCode::Configuration, "vocabulary is empty");

  auto blocked = vocab.terms_in(text::words(text::normalize(track.title)));
  auto by_artist = vocab.terms_in(text::words(text::normalize(track.artist)));
  blocked.insert(blocked.end(), by_artist.begin(), by_artist.end());
  std::sort(blocked.begin(), blocked.end());

  // Duplicate tags collapse to their maximum count before matching.
  std::map<std::string, int> merged;
  for (const auto& [tag, count] : tags) {
    if (count < 0) throw Error(ErrorCode::Schema, "negative tag count");
    auto norm = text::normalize(tag);
    if (norm.empty()) continue;
    auto [it, inserted] = merged.emplace(std::move(norm), count);
    if (!inserted) it->second = std::max(it->second, count);
  }

  std::map<std::size_t, std::int64_t> counts;
  for (const auto& [tag, count] : merged) {
    for (auto term : vocab.terms_in(text::words(tag))) {
      if (std::binary_search(blocked.begin(), blocked.end(), term)) continue;
      counts[term] += count;
    }
  }
  return {counts.begin(), counts.end()};
}

TermCorpus match_terms(const TagCorpus& corpus, const Vocabulary& vocab) {
  if (vocab.empty()) throw Error(ErrorCode::Configuration, "vocabulary is empty");
  if (corpus.tracks().empty()) throw Error(ErrorCode::EmptyCorpus, "tag corpus has no tracks");

  TermCorpus out;
  out.tracks = corpus.tracks();
  out.terms.reserve(vocab.size());
  for (const auto& e : vocab.entries()) out.terms.push_back(e.term);

  std::vector<std::pair<std::string, int>> tags;
  for (std::size_t t = 0; t < corpus.tracks().size(); ++t) {
    tags.clear();
    for (auto a : corpus.by_track()[t])
      tags.emplace_back(corpus.assignments()[a].tag, corpus.assignments()[a].count);
    for (auto [term, count] : match_track(corpus.tracks()[t], tags, vocab))
      out.associations.push_back(TermAssociation{t, term, count});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Filtering

TermCorpus filter_corpus(const TermCorpus& corpus, std::size_t min_term_prevalence,
                         std::size_t min_terms_per_track) {
  std::vector<bool> term_alive(corpus.terms.size(), true);
  std::vector<bool> track_alive(corpus.tracks.size(), true);

  auto live = [&](const TermAssociation& a) { return term_alive[a.term] && track_alive[a.track]; };

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::size_t> prevalence(corpus.terms.size(), 0);
    for (const auto& a : corpus.associations)
      if (live(a)) ++prevalence[a.term];
    for (std::size_t i = 0; i < term_alive.size(); ++i) {
      if (term_alive[i] && prevalence[i] < min_term_prevalence) {
        term_alive[i] = false;
        changed = true;
      }
    }

    std::vector<std::size_t> per_track(corpus.tracks.size(), 0);
    for (const auto& a : corpus.associations)
      if (live(a)) ++per_track[a.track];
    for (std::size_t j = 0; j < track_alive.size(); ++j) {
      if (track_alive[j] && per_track[j] < min_terms_per_track) {
        track_alive[j] = false;
        changed = true;
      }
    }
  }

  TermCorpus out;
  std::vector<std::size_t> term_map(corpus.terms.size()), track_map(corpus.tracks.size());
  for (std::size_t i = 0; i < corpus.terms.size(); ++i) {
    if (!term_alive[i]) continue;
    term_map[i] = out.terms.size();
    out.terms.push_back(corpus.terms[i]);
  }
  for (std::size_t j = 0; j < corpus.tracks.size(); ++j) {
    if (!track_alive[j]) continue;
    track_map[j] = out.tracks.size();
    out.tracks.push_back(corpus.tracks[j]);
  }
  for (const auto& a : corpus.associations)
    if (live(a)) out.associations.push_back({track_map[a.track], term_map[a.term], a.count});

  if (out.associations.empty())
    throw Error(ErrorCode::EmptyCorpus, "no associations survive filtering");
  return out;
}

// ---------------------------------------------------------------------------
// TermDocMatrix

TermDocMatrix::TermDocMatrix(std::vector<std::string> terms, std::vector<std::string> track_ids,
                             Sparse cells, std::vector<std::size_t> doc_freq, std::size_t num_tracks)
    : terms_(std::move(terms)),
      track_ids_(std::move(track_ids)),
      cells_(std::move(cells)),
      doc_freq_(std::move(doc_freq)),
      num_tracks_(num_tracks) {
  if (num_tracks_ != track_ids_.size())
    throw Error(ErrorCode::Schema, "num_tracks does not match the track list");
  if (static_cast<std::size_t>(cells_.rows()) != terms_.size() ||
      static_cast<std::size_t>(cells_.cols()) != track_ids_.size())
    throw Error(ErrorCode::Schema, "cell matrix shape does not match term/track lists");
  if (doc_freq_.size() != terms_.size())
    throw Error(ErrorCode::Schema, "doc_freq length does not match the term list");
  cells_.makeCompressed();

  std::vector<std::size_t> counted(terms_.size(), 0);
  for (Eigen::Index j = 0; j < cells_.outerSize(); ++j) {
    for (Sparse::InnerIterator it(cells_, j); it; ++it) {
      if (!(it.value() > 0.0) || !std::isfinite(it.value()))
        throw Error(ErrorCode::Schema, "stored weights must be finite and strictly positive");
      ++counted[static_cast<std::size_t>(it.row())];
    }
  }
  if (counted != doc_freq_)
    throw Error(ErrorCode::Schema, "doc_freq does not match the stored cells");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!term_index_.emplace(terms_[i], i).second)
      throw Error(ErrorCode::Schema, "duplicate term '" + terms_[i] + "'");
  }
}

TermDocMatrix TermDocMatrix::from_dense(const Eigen::MatrixXd& dense) {
  std::vector<std::string> terms, tracks;
  for (Eigen::Index i = 0; i < dense.rows(); ++i) terms.push_back("t" + std::to_string(i));
  for (Eigen::Index j = 0; j < dense.cols(); ++j) tracks.push_back("d" + std::to_string(j));
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<std::size_t> df(terms.size(), 0);
  for (Eigen::Index j = 0; j < dense.cols(); ++j) {
    for (Eigen::Index i = 0; i < dense.rows(); ++i) {
      const double v = dense(i, j);
      if (v < 0.0) throw Error(ErrorCode::Parameter, "term-document weights must be non-negative");
      if (v == 0.0) continue;
      triplets.emplace_back(i, j, v);
      ++df[static_cast<std::size_t>(i)];
    }
  }
  Sparse cells(dense.rows(), dense.cols());
  cells.setFromTriplets(triplets.begin(), triplets.end());
  const auto n = tracks.size();
  return TermDocMatrix(std::move(terms), std::move(tracks), std::move(cells), std::move(df), n);
}

Eigen::MatrixXd TermDocMatrix::dense() const { return Eigen::MatrixXd(cells_); }

SparseVector TermDocMatrix::column(std::size_t track) const {
  SparseVector out;
  for (Sparse::InnerIterator it(cells_, static_cast<Eigen::Index>(track)); it; ++it)
    out.push_back({static_cast<std::size_t>(it.row()), it.value()});
  return out;
}

std::optional<std::size_t> TermDocMatrix::term_index(const std::string& term) const {
  auto it = term_index_.find(term);
  if (it == term_index_.end()) return std::nullopt;
  return it->second;
}

double TermDocMatrix::weight(std::size_t term, std::int64_t count) const {
  return (static_cast<double>(count) + 1.0) *
         std::log(static_cast<double>(num_tracks_) / static_cast<double>(doc_freq_[term]));
}

TermDocMatrix build_tfidf(const TermCorpus& corpus) {
  if (corpus.associations.empty() || corpus.tracks.empty())
    throw Error(ErrorCode::EmptyCorpus, "cannot build a vector-space model from an empty corpus");
  const auto prevalence = corpus.prevalence();
  const std::size_t num_tracks = corpus.tracks.size();

  std::vector<std::string> terms;
  std::vector<std::size_t> doc_freq;
  std::vector<std::size_t> remap(corpus.terms.size(), 0);
  for (std::size_t i = 0; i < corpus.terms.size(); ++i) {
    if (prevalence[i] == 0) continue;
    if (prevalence[i] >= num_tracks)
      throw Error(ErrorCode::DegenerateTerm,
                  "term '" + corpus.terms[i] + "' occurs in every track (zero idf)");
    remap[i] = terms.size();
    terms.push_back(corpus.terms[i]);
    doc_freq.push_back(prevalence[i]);
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(corpus.associations.size());
  for (const auto& a : corpus.associations) {
    const double idf = std::log(static_cast<double>(num_tracks) / static_cast<double>(prevalence[a.term]));
    triplets.emplace_back(static_cast<Eigen::Index>(remap[a.term]), static_cast<Eigen::Index>(a.track),
                          (static_cast<double>(a.count) + 1.0) * idf);
  }
  TermDocMatrix::Sparse cells(static_cast<Eigen::Index>(terms.size()), static_cast<Eigen::Index>(num_tracks));
  cells.setFromTriplets(triplets.begin(), triplets.end());

  std::vector<std::string> track_ids;
  track_ids.reserve(num_tracks);
  for (const auto& t : corpus.tracks) track_ids.push_back(t.track_id);
  return TermDocMatrix(std::move(terms), std::move(track_ids), std::move(cells), std::move(doc_freq),
                       num_tracks);
}

SparseVector vectorize_counts(const std::vector<std::pair<std::string, std::int64_t>>& counts,
                              const TermDocMatrix& matrix) {
  std::map<std::size_t, std::int64_t> merged;
  for (const auto& [term, count] : counts) {
    auto idx = matrix.term_index(term);
    if (idx) merged[*idx] += count;
  }
  if (merged.empty()) throw Error(ErrorCode::EmptyQuery, "no tag matches a model term");
  SparseVector q;
  for (auto [i, c] : merged) q.push_back({i, matrix.weight(i, c)});
  return q;
}

SparseVector vectorize_track(const TrackTags& tags, const Vocabulary& vocab,
                             const TermDocMatrix& matrix) {
  std::vector<std::pair<std::string, std::int64_t>> counts;
  for (auto [term, count] : match_track(tags.track, tags.tags, vocab))
    counts.emplace_back(vocab.term(term), count);
  if (counts.empty())
    throw Error(ErrorCode::EmptyQuery, "track '" + tags.track.track_id + "' matches no vocabulary term");
  try {
    return vectorize_counts(counts, matrix);
  } catch (const Error&) {
    throw Error(ErrorCode::EmptyQuery, "track '" + tags.track.track_id + "' matches no model term");
  }
}

// ---------------------------------------------------------------------------
// TSV readers

namespace {

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

void expect_header(std::istream& in, const std::string& expected, const char* what) {
  std::string line;
  if (!next_line(in, line) || line != expected)
    throw Error(ErrorCode::Schema, std::string(what) + ": expected header '" + expected + "'");
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

Vocabulary read_vocabulary(std::istream& in) {
  expect_header(in, "term\tinflections", "vocabulary");
  std::vector<VocabularyEntry> entries;
  std::string line;
  std::size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = text::split(line, '\t');
    if (fields.size() > 2)
      throw Error(ErrorCode::Schema, "vocabulary line " + std::to_string(line_no) + ": too many fields");
    VocabularyEntry e{fields[0], {}};
    if (fields.size() == 2)
      for (auto& f : text::split(fields[1], ','))
        if (!trim(f).empty()) e.inflections.push_back(trim(f));
    entries.push_back(std::move(e));
  }
  if (entries.empty()) throw Error(ErrorCode::Configuration, "vocabulary is empty");
  return Vocabulary(std::move(entries));
}

TagCorpus read_tag_corpus(std::istream& in) {
  expect_header(in, "track_id\tartist\ttitle\ttag\tcount", "corpus");
  std::vector<Track> tracks;
  std::unordered_map<std::string, std::size_t> seen;
  std::vector<TagAssignment> assignments;
  std::string line;
  std::size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = text::split(line, '\t');
    if (fields.size() != 5)
      throw Error(ErrorCode::Schema, "corpus line " + std::to_string(line_no) + ": expected 5 fields");
    if (fields[0].empty())
      throw Error(ErrorCode::Schema, "corpus line " + std::to_string(line_no) + ": empty track_id");
    if (seen.emplace(fields[0], tracks.size()).second)
      tracks.push_back(Track{fields[0], fields[1], fields[2]});
    if (fields[3].empty()) continue;

    int count = 0;
    std::size_t used = 0;
    try {
      count = std::stoi(fields[4], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != fields[4].size() || fields[4].empty() || count < 0 || count > 100)
      throw Error(ErrorCode::Schema,
                  "corpus line " + std::to_string(line_no) + ": count must be an integer in [0, 100]");
    assignments.push_back(TagAssignment{fields[0], fields[3], count});
  }
  return TagCorpus(std::move(tracks), std::move(assignments));
}

std::vector<TrackTags> group_tracks(const TagCorpus& corpus) {
  std::vector<TrackTags> out;
  out.reserve(corpus.tracks().size());
  for (std::size_t t = 0; t < corpus.tracks().size(); ++t) {
    TrackTags tt{corpus.tracks()[t], {}};
    for (auto a : corpus.by_track()[t])
      tt.tags.emplace_back(corpus.assignments()[a].tag, corpus.assignments()[a].count);
    out.push_back(std::move(tt));
  }
  return out;
}

}  // namespace act
