#include "cli.hpp"

#include "act/clusterability.hpp"
#include "act/corpus.hpp"
#include "act/error.hpp"
#include "act/eval.hpp"
#include "act/factorize.hpp"
#include "act/moodspace.hpp"
#include "act/serialize.hpp"
#include "act/text.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

namespace act::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kToolVersion = "1.0.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// File helpers

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream s;
  for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return s.str();
}

Json parse_json(const std::string& path, const std::string& content) {
  try {
    return Json::parse(content);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Schema, "'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string format_double(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

/// Parameters and input digests recorded in every output.
class Meta {
 public:
  explicit Meta(std::string command) : command_(std::move(command)) {}

  template <typename T>
  void param(const std::string& name, const T& value) {
    std::ostringstream s;
    if constexpr (std::is_same_v<T, std::vector<int>>) {
      for (std::size_t i = 0; i < value.size(); ++i) s << (i ? "," : "") << value[i];
    } else if constexpr (std::is_floating_point_v<T>) {
      s << Json(value).dump();
    } else {
      s << value;
    }
    params_.emplace_back(name, s.str());
  }

  /// Reads an input file and records its digest; the content is returned.
  std::string input(const std::string& role, const std::string& path) {
    auto content = read_file(path);
    inputs_.emplace_back(role, fs::path(path).filename().string() + " sha256:" + sha256_hex(content));
    return content;
  }

  Json json() const {
    Json j;
    j["tool"] = "act";
    j["tool_version"] = kToolVersion;
    j["command"] = command_;
    Json p = Json::object();
    for (const auto& [k, v] : params_) p[k] = v;
    j["parameters"] = std::move(p);
    Json in = Json::object();
    for (const auto& [k, v] : inputs_) in[k] = v;
    j["inputs"] = std::move(in);
    return j;
  }

  std::string tsv_header() const {
    std::ostringstream s;
    s << "# act " << kToolVersion << ' ' << command_ << '\n';
    for (const auto& [k, v] : params_) s << "# param " << k << '=' << v << '\n';
    for (const auto& [k, v] : inputs_) s << "# input " << k << '=' << v << '\n';
    return s.str();
  }

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> params_;
  std::vector<std::pair<std::string, std::string>> inputs_;
};

struct OutputSpec {
  std::string path;
  bool overwrite = false;

  void check() const {
    if (!overwrite && fs::exists(path))
      throw UsageError("output '" + path + "' exists; pass --overwrite to replace it");
  }
  void write(const std::string& content) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    out << content;
    if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
  }
  void write_json(Json doc, const Meta& meta) const {
    doc["meta"] = meta.json();
    write(doc.dump(1) + "\n");
  }
};

void add_output(CLI::App* cmd, OutputSpec& out) {
  cmd->add_option("--out", out.path, "Output file")->required();
  cmd->add_flag("--overwrite", out.overwrite, "Replace an existing output file");
}

// ---------------------------------------------------------------------------
// Loading

TermDocMatrix load_vsm(Meta& meta, const std::string& path) {
  return term_doc_matrix_from_json(parse_json(path, meta.input("vsm", path)));
}

Vocabulary load_vocab(Meta& meta, const std::string& path) {
  std::istringstream in(meta.input("vocab", path));
  return read_vocabulary(in);
}

TagCorpus load_corpus(Meta& meta, const std::string& role, const std::string& path) {
  std::istringstream in(meta.input(role, path));
  return read_tag_corpus(in);
}

ReferenceSpace load_reference(Meta& meta, const std::string& path) {
  std::istringstream in(meta.input("reference", path));
  return read_reference(in, fs::path(path).filename().string());
}

RatingsTable load_ratings(Meta& meta, const std::string& path) {
  std::istringstream in(meta.input("ratings", path));
  return read_ratings(in);
}

std::map<MoodDimension, std::string> load_proxy(Meta& meta, const std::string& path) {
  std::istringstream in(meta.input("proxy", path));
  std::map<MoodDimension, std::string> out;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line.rfind("dimension\tterm", 0) != 0) throw Error(ErrorCode::Schema, "proxy: unexpected header");
      header = true;
      continue;
    }
    auto f = text::split(line, '\t');
    auto dim = f.size() >= 2 ? parse_dimension(f[0]) : std::nullopt;
    if (!dim) throw Error(ErrorCode::Schema, "proxy: malformed line '" + line + "'");
    out[*dim] = f[1];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Prediction

enum class Method { Act, Svd, Nmf, Plsa, Vsm };

Method parse_method(const std::string& name) {
  if (name == "act") return Method::Act;
  if (name == "svd") return Method::Svd;
  if (name == "nmf") return Method::Nmf;
  if (name == "plsa") return Method::Plsa;
  if (name == "vsm") return Method::Vsm;
  throw UsageError("unknown method '" + name + "'");
}

const std::vector<std::string>& model_terms(const SemanticModel& m) {
  return std::visit([](const auto& model) -> const std::vector<std::string>& { return model.terms; }, m);
}

/// Turns a fitted model into per-scale predictions for a test corpus.
struct ScalePredictor {
  Method method = Method::Act;
  const TermDocMatrix* vsm = nullptr;
  std::optional<ActModel> act;
  std::optional<SemanticModel> model;
  std::map<MoodDimension, std::string> proxies;

  bool supports(const std::string& scale) const {
    auto dim = parse_dimension(scale);
    if (method == Method::Act) return dim.has_value() || act->term_index(scale).has_value();
    if (dim) return proxies.count(*dim) && vsm->term_index(proxies.at(*dim)).has_value();
    return vsm->term_index(scale).has_value();
  }

  ScalePredictions operator()(const TestCorpus& corpus, const std::vector<std::string>& scales) const {
    ScalePredictions out;
    for (std::size_t t = 0; t < corpus.track_ids.size(); ++t) {
      const SparseVector q = vectorize_counts(corpus.associations[t], *vsm);
      const auto& id = corpus.track_ids[t];
      if (method == Method::Act) {
        const Eigen::Vector3d pos = project_track(*act, remap_to_act(q));
        for (const auto& scale : scales) {
          auto dim = parse_dimension(scale);
          out[scale][id] = dim ? predict_dimension(pos, *dim) : predict_term(*act, pos, scale);
        }
        continue;
      }
      const Eigen::VectorXd w = weights(q);
      for (const auto& scale : scales) {
        auto dim = parse_dimension(scale);
        const auto& term = dim ? proxies.at(*dim) : scale;
        out[scale][id] = w(static_cast<Eigen::Index>(*vsm->term_index(term)));
      }
    }
    return out;
  }

 private:
  SparseVector remap_to_act(const SparseVector& q) const {
    SparseVector out;
    for (const auto& e : q) {
      auto idx = act->term_index(vsm->terms()[e.index]);
      if (idx) out.push_back({*idx, e.value});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
    return out;
  }

  Eigen::VectorXd weights(const SparseVector& q) const {
    switch (method) {
      case Method::Svd: return svd_predict_weights(std::get<SvdModel>(*model), q);
      case Method::Nmf: return nmf_predict_weights(std::get<NmfModel>(*model), q);
      case Method::Plsa: return plsa_predict_weights(std::get<PlsaModel>(*model), q);
      default: return to_dense(q, vsm->num_terms());
    }
  }
};

void require_same_terms(const std::vector<std::string>& a, const TermDocMatrix& vsm, const char* what) {
  if (a != vsm.terms()) throw Error(ErrorCode::Schema, std::string(what) + " terms differ from the VSM terms");
}

std::string predictions_tsv(const ScalePredictions& preds, const TestCorpus& corpus,
                            const std::vector<std::string>& scales) {
  std::ostringstream s;
  s << "track_id\tscale\tvalue\n";
  for (const auto& id : corpus.track_ids)
    for (const auto& scale : scales) s << id << '\t' << scale << '\t' << format_double(preds.at(scale).at(id)) << '\n';
  return s.str();
}

// ---------------------------------------------------------------------------
// Shared fitting helpers

ActOptions act_options(Eigen::Index k, std::uint64_t seed, int restarts, int max_iter) {
  ActOptions o;
  o.k = k;
  o.mds.seed = seed;
  o.mds.restarts = restarts;
  o.mds.max_iter = max_iter;
  return o;
}

SemanticModel fit_model(Method method, const TermDocMatrix& vsm, Eigen::Index k, IterativeOptions opts,
                        std::uint64_t seed) {
  switch (method) {
    case Method::Svd: return svd_fit(vsm, k);
    case Method::Nmf: return nmf_fit(vsm, k, opts, seed);
    case Method::Plsa: return plsa_fit(vsm, k, opts, seed);
    default: throw UsageError("method has no semantic model");
  }
}

TermSchedule parse_schedule(const std::string& spec) {
  if (spec.empty()) return default_schedule();
  TermSchedule out;
  for (const auto& item : text::split(spec, ',')) {
    auto parts = text::split(item, ':');
    try {
      if (parts.size() != 2) throw std::invalid_argument("bucket");
      out.emplace_back(std::stoul(parts[0]), std::stoul(parts[1]));
    } catch (const std::exception&) {
      throw UsageError("schedule entries must look like TERMS:TRACKS");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands

struct BuildVsm {
  std::string vocab, corpus;
  std::size_t min_term_prevalence = 100, min_terms_per_track = 2;
  OutputSpec out;

  void run() const {
    out.check();
    Meta meta("build-vsm");
    meta.param("min_term_prevalence", min_term_prevalence);
    meta.param("min_terms_per_track", min_terms_per_track);
    const auto v = load_vocab(meta, vocab);
    const auto c = load_corpus(meta, "corpus", corpus);
    const auto matrix = build_tfidf(filter_corpus(match_terms(c, v), min_term_prevalence, min_terms_per_track));
    out.write_json(to_json(matrix), meta);
  }
};

struct Fit {
  std::string vsm, method = "svd";
  int k = 16;
  std::uint64_t seed = 0;
  int max_iter = 200;
  double tol = 1e-6;
  OutputSpec out;

  void run() const {
    out.check();
    Meta meta("fit");
    meta.param("method", method);
    meta.param("k", k);
    meta.param("seed", seed);
    meta.param("max_iter", max_iter);
    meta.param("tol", tol);
    const auto m = parse_method(method);
    if (m == Method::Act || m == Method::Vsm) throw UsageError("fit supports svd, nmf and plsa");
    const auto matrix = load_vsm(meta, vsm);
    const auto model = fit_model(m, matrix, k, {max_iter, tol}, seed);
    std::visit([&](const auto& fitted) { out.write_json(to_json(fitted), meta); }, model);
  }
};

struct Dissim {
  std::string model, vsm;
  OutputSpec out;

  void run() const {
    out.check();
    Meta meta("dissim");
    if (model.empty() == vsm.empty()) throw UsageError("dissim needs exactly one of --model or --vsm");
    Dissimilarity d;
    if (!model.empty()) {
      const auto fitted = semantic_model_from_json(parse_json(model, meta.input("model", model)));
      const auto* svd = std::get_if<SvdModel>(&fitted);
      if (!svd) throw Error(ErrorCode::Parameter, "dissim needs an SVD model");
      d = {svd->terms, term_dissimilarity(*svd)};
    } else {
      const auto matrix = load_vsm(meta, vsm);
      d = {matrix.terms(), cosine_term_dissimilarity(matrix.dense(), matrix.terms())};
    }
    out.write_json(to_json(d), meta);
  }
};

struct Mds {
  std::string dissim;
  MdsOptions opts;
  OutputSpec out;

  void run() const {
    out.check();
    Meta meta("mds");
    meta.param("dims", opts.dims);
    meta.param("restarts", opts.restarts);
    meta.param("max_iter", opts.max_iter);
    meta.param("tol", opts.tol);
    meta.param("seed", opts.seed);
    const auto d = dissimilarity_from_json(parse_json(dissim, meta.input("dissim", dissim)));
    out.write_json(to_json(mds_embed(d.values, opts, d.terms)), meta);
  }
};

struct ActFit {
  std::string reference, mds, vsm, variant = "standard";
  int k = 16;
  std::uint64_t seed = 0;
  int restarts = 4, max_iter = 300;
  OutputSpec out;

  void run() const {
    out.check();
    Meta meta("act-fit");
    if (mds.empty() == vsm.empty()) throw UsageError("act-fit needs exactly one of --mds or --vsm");
    const auto ref = load_reference(meta, reference);
    ActModel act;
    if (!mds.empty()) {
      const auto embedding = mds_embedding_from_json(parse_json(mds, meta.input("mds", mds)));
      act = procrustes_fit(embedding, ref);
    } else {
      meta.param("variant", variant);
      meta.param("k", k);
      meta.param("seed", seed);
      meta.param("restarts", restarts);
      meta.param("max_iter", max_iter);
      const auto v = parse_variant(variant);
      act = act_fit(load_vsm(meta, vsm), ref, v, act_options(k, seed, restarts, max_iter));
    }
    out.write_json(to_json(act), meta);
  }
};

struct Predict {
  std::string vsm, vocab, corpus, method = "act", model, proxy;
  std::vector<std::string> terms;
  OutputSpec out;

  void run() const {
    out.check();
    Meta meta("predict");
    meta.param("method", method);
    ScalePredictor p;
    p.method = parse_method(method);
    const auto matrix = load_vsm(meta, vsm);
    p.vsm = &matrix;
    const auto v = load_vocab(meta, vocab);
    const auto c = load_corpus(meta, "corpus", corpus);

    if (p.method != Method::Vsm && model.empty()) throw UsageError("--model is required for method " + method);
    if (p.method == Method::Act) {
      p.act = act_model_from_json(parse_json(model, meta.input("model", model)));
    } else if (p.method != Method::Vsm) {
      p.model = semantic_model_from_json(parse_json(model, meta.input("model", model)));
      require_same_terms(model_terms(*p.model), matrix, "model");
      const bool matches = (p.method == Method::Svd && std::holds_alternative<SvdModel>(*p.model)) ||
                           (p.method == Method::Nmf && std::holds_alternative<NmfModel>(*p.model)) ||
                           (p.method == Method::Plsa && std::holds_alternative<PlsaModel>(*p.model));
      if (!matches) throw Error(ErrorCode::Schema, "model file does not hold a " + method + " model");
    }
    if (!proxy.empty()) p.proxies = load_proxy(meta, proxy);

    std::vector<std::string> scales;
    for (auto dim : {MoodDimension::Valence, MoodDimension::Arousal, MoodDimension::Tension})
      if (p.supports(std::string(to_string(dim)))) scales.emplace_back(to_string(dim));
    for (const auto& t : terms) {
      const auto norm = text::normalize(t);
      if (!p.supports(norm)) throw Error(ErrorCode::Parameter, "term '" + t + "' is not in the model");
      scales.push_back(norm);
    }
    if (scales.empty())
      throw UsageError("nothing to predict: pass --proxy for dimension scales or --terms");
    meta.param("scales", [&] {
      std::string s;
      for (const auto& x : scales) s += (s.empty() ? "" : ",") + x;
      return s;
    }());

    const auto test = make_test_corpus(group_tracks(c), v, matrix);
    out.write(meta.tsv_header() + predictions_tsv(p(test, scales), test, scales));
  }
};

struct Hopkins {
  std::string vsm, schedule;
  std::vector<int> k_list{4, 8, 16, 32, 64, 128, 256};
  bool include_full = false;
  int runs = 10, restarts = 4, max_iter = 300;
  std::uint64_t seed = 0;
  OutputSpec out;

  void run() const {
    out.check();
    Meta meta("hopkins");
    meta.param("k", k_list);
    meta.param("include_full", include_full);
    meta.param("runs", runs);
    meta.param("seed", seed);
    meta.param("restarts", restarts);
    meta.param("schedule", schedule.empty() ? std::string("default") : schedule);
    const auto matrix = load_vsm(meta, vsm);
    const auto sched = parse_schedule(schedule);

    MdsOptions mds;
    mds.seed = seed;
    mds.restarts = restarts;
    mds.max_iter = max_iter;
    std::map<Eigen::Index, Eigen::MatrixXd> coords;
    for (int k : k_list) coords[k] = mds_embed(term_dissimilarity(svd_fit(matrix, k)), mds, matrix.terms()).coords;
    if (include_full)
      coords[static_cast<Eigen::Index>(matrix.num_terms())] =
          mds_embed(cosine_term_dissimilarity(matrix.dense(), matrix.terms()), mds, matrix.terms()).coords;

    std::ostringstream s;
    s << meta.tsv_header() << "k\tH_mean\tH_sd\truns\n";
    for (const auto& r : clusterability_protocol(matrix, coords, sched, runs, seed))
      s << r.k << '\t' << format_double(r.h_mean) << '\t' << format_double(r.h_sd) << '\t' << r.runs << '\n';
    out.write(s.str());
  }
};

/// Inputs shared by evaluate and ablate.
struct EvalInputs {
  std::string vsm, vocab, corpus, ratings, reference, proxy, variant = "standard";
  std::vector<int> k_list{4, 8, 16, 32, 64, 128, 256};
  std::uint64_t seed = 0;
  int restarts = 4, max_iter = 300;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--vsm", vsm, "Training VSM (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--vocab", vocab, "Vocabulary TSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--corpus", corpus, "Test corpus TSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--ratings", ratings, "Ratings TSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--reference", reference, "Valence-arousal reference TSV")->check(CLI::ExistingFile);
    cmd->add_option("--proxy", proxy, "Dimension proxy TSV (baselines)")->check(CLI::ExistingFile);
    cmd->add_option("--variant", variant, "standard | svd-only | mds-only");
    cmd->add_option("--k", k_list, "Comma-separated ranks")->delimiter(',');
    cmd->add_option("--seed", seed, "Master seed");
    cmd->add_option("--restarts", restarts, "MDS restarts");
    cmd->add_option("--mds-max-iter", max_iter, "MDS iterations per restart");
  }
};

struct Evaluate {
  EvalInputs in;
  std::string method = "act";
  int max_iter = 200;
  double tol = 1e-6;
  OutputSpec out;

  void run() const {
    out.check();
    Meta meta("evaluate");
    meta.param("method", method);
    meta.param("k", in.k_list);
    meta.param("variant", in.variant);
    meta.param("seed", in.seed);
    meta.param("restarts", in.restarts);
    const auto m = parse_method(method);
    if (m == Method::Act && in.reference.empty()) throw UsageError("--reference is required for method act");
    if (m != Method::Act && in.proxy.empty()) throw UsageError("--proxy is required for baseline methods");

    const auto matrix = load_vsm(meta, in.vsm);
    const auto v = load_vocab(meta, in.vocab);
    const auto c = load_corpus(meta, "corpus", in.corpus);
    const auto r = load_ratings(meta, in.ratings);
    const auto test = make_test_corpus(group_tracks(c), v, matrix);

    ScalePredictor p;
    p.method = m;
    p.vsm = &matrix;
    std::optional<ReferenceSpace> ref;
    if (m == Method::Act) ref = load_reference(meta, in.reference);
    if (m != Method::Act) p.proxies = load_proxy(meta, in.proxy);

    std::vector<std::string> k_labels;
    if (m == Method::Vsm)
      k_labels.push_back("-");
    else if (m == Method::Act && parse_variant(in.variant) == ActVariant::SvdOnly)
      k_labels.push_back("3");
    else
      for (int k : in.k_list) k_labels.push_back(std::to_string(k));

    std::ostringstream s;
    s << meta.tsv_header() << "scale\tmethod\tk\trho\tn\n";
    for (const auto& label : k_labels) {
      const Eigen::Index k = label == "-" ? 0 : std::stol(label);
      if (m == Method::Act)
        p.act = act_fit(matrix, *ref, parse_variant(in.variant), act_options(k, in.seed, in.restarts, in.max_iter));
      else if (m != Method::Vsm)
        p.model = fit_model(m, matrix, k, {max_iter, tol}, in.seed);

      std::vector<std::string> scales;
      for (const auto& scale : r.scales())
        if (p.supports(scale)) scales.push_back(scale);
      const auto report = evaluate_predictions(p(test, scales), r, method, label);
      for (const auto& row : report.rows)
        s << row.scale << '\t' << row.method << '\t' << row.k << '\t' << format_double(row.rho) << '\t' << row.n
          << '\n';
    }
    out.write(s.str());
  }
};

struct Ablate {
  EvalInputs in;
  int runs = 10;
  std::vector<int> levels{8, 7, 6, 5, 4, 3, 2, 1};
  OutputSpec out;

  void run() const {
    out.check();
    Meta meta("ablate");
    meta.param("k", in.k_list);
    meta.param("variant", in.variant);
    meta.param("seed", in.seed);
    meta.param("runs", runs);
    meta.param("levels", levels);
    meta.param("restarts", in.restarts);
    if (in.reference.empty()) throw UsageError("--reference is required for ablate");

    const auto matrix = load_vsm(meta, in.vsm);
    const auto v = load_vocab(meta, in.vocab);
    const auto c = load_corpus(meta, "corpus", in.corpus);
    const auto r = load_ratings(meta, in.ratings);
    const auto ref = load_reference(meta, in.reference);
    const auto test = make_test_corpus(group_tracks(c), v, matrix);

    std::vector<ScalePredictor> fitted;
    for (int k : in.k_list) {
      ScalePredictor p;
      p.method = Method::Act;
      p.vsm = &matrix;
      p.act = act_fit(matrix, ref, parse_variant(in.variant), act_options(k, in.seed, in.restarts, in.max_iter));
      fitted.push_back(std::move(p));
    }
    std::vector<Predictor> predictors;
    for (const auto& p : fitted) {
      std::vector<std::string> scales;
      for (const auto& scale : r.scales())
        if (p.supports(scale)) scales.push_back(scale);
      predictors.push_back([&p, scales](const TestCorpus& corpus) { return p(corpus, scales); });
    }

    AblationOptions opts;
    opts.levels = levels;
    opts.runs = runs;
    opts.seed = in.seed;
    const auto report = ablate_sparsity(test, predictors, r, opts);

    std::ostringstream s;
    s << meta.tsv_header() << "level\tscale\trho_median\truns\n";
    for (const auto& row : report.rows)
      s << row.level << '\t' << row.scale << '\t' << format_double(row.rho_median) << '\t' << row.runs << '\n';
    out.write(s.str());
  }
};

struct Proxy {
  std::string act, vsm;
  double min_share = 0.1;
  OutputSpec out;

  void run() const {
    out.check();
    Meta meta("proxy");
    meta.param("min_share", min_share);
    const auto model = act_model_from_json(parse_json(act, meta.input("act", act)));
    const auto matrix = load_vsm(meta, vsm);
    std::vector<std::size_t> prevalence;
    for (const auto& term : model.terms) {
      auto idx = matrix.term_index(term);
      if (!idx) throw Error(ErrorCode::Schema, "ACT term '" + term + "' is missing from the VSM");
      prevalence.push_back(matrix.doc_freq()[*idx]);
    }
    std::ostringstream s;
    s << meta.tsv_header() << "dimension\tterm\tangle_deg\tprevalence\n";
    for (const auto& p : select_dimension_proxy(model, prevalence, matrix.num_tracks(), min_share))
      s << to_string(p.dimension) << '\t' << p.term << '\t' << format_double(p.angle_degrees) << '\t'
        << p.prevalence << '\n';
    out.write(s.str());
  }
};

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Affective circumplex transformation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  BuildVsm build;
  auto* c_build = app.add_subcommand("build-vsm", "Match tags, filter and build the TF-IDF model");
  c_build->add_option("--vocab", build.vocab, "Vocabulary TSV")->required()->check(CLI::ExistingFile);
  c_build->add_option("--corpus", build.corpus, "Tag corpus TSV")->required()->check(CLI::ExistingFile);
  c_build->add_option("--min-term-prevalence", build.min_term_prevalence, "Minimum tracks per term");
  c_build->add_option("--min-terms-per-track", build.min_terms_per_track, "Minimum terms per track");
  add_output(c_build, build.out);

  Fit fit;
  auto* c_fit = app.add_subcommand("fit", "Fit an SVD, NMF or PLSA model");
  c_fit->add_option("--vsm", fit.vsm, "VSM (JSON)")->required()->check(CLI::ExistingFile);
  c_fit->add_option("--method", fit.method, "svd | nmf | plsa");
  c_fit->add_option("--k", fit.k, "Rank");
  c_fit->add_option("--seed", fit.seed, "Seed");
  c_fit->add_option("--max-iter", fit.max_iter, "Iteration cap");
  c_fit->add_option("--tol", fit.tol, "Relative improvement threshold");
  add_output(c_fit, fit.out);

  Dissim dissim;
  auto* c_dissim = app.add_subcommand("dissim", "Cosine term dissimilarities");
  c_dissim->add_option("--model", dissim.model, "SVD model (JSON)")->check(CLI::ExistingFile);
  c_dissim->add_option("--vsm", dissim.vsm, "Raw VSM (JSON)")->check(CLI::ExistingFile);
  add_output(c_dissim, dissim.out);

  Mds mds;
  auto* c_mds = app.add_subcommand("mds", "Non-metric MDS of a dissimilarity matrix");
  c_mds->add_option("--dissim", mds.dissim, "Dissimilarities (JSON)")->required()->check(CLI::ExistingFile);
  c_mds->add_option("--dims", mds.opts.dims, "Dimensions");
  c_mds->add_option("--restarts", mds.opts.restarts, "Restarts");
  c_mds->add_option("--max-iter", mds.opts.max_iter, "Iterations per restart");
  c_mds->add_option("--tol", mds.opts.tol, "Relative stress improvement threshold");
  c_mds->add_option("--seed", mds.opts.seed, "Seed");
  add_output(c_mds, mds.out);

  ActFit actfit;
  auto* c_act = app.add_subcommand("act-fit", "Align a mood space to a valence-arousal reference");
  c_act->add_option("--reference", actfit.reference, "Reference TSV")->required()->check(CLI::ExistingFile);
  c_act->add_option("--mds", actfit.mds, "MDS embedding (JSON)")->check(CLI::ExistingFile);
  c_act->add_option("--vsm", actfit.vsm, "VSM (JSON); runs the whole variant")->check(CLI::ExistingFile);
  c_act->add_option("--variant", actfit.variant, "standard | svd-only | mds-only");
  c_act->add_option("--k", actfit.k, "Rank");
  c_act->add_option("--seed", actfit.seed, "Seed");
  c_act->add_option("--restarts", actfit.restarts, "MDS restarts");
  c_act->add_option("--mds-max-iter", actfit.max_iter, "MDS iterations per restart");
  add_output(c_act, actfit.out);

  Predict predict;
  auto* c_pred = app.add_subcommand("predict", "Predict moods of tracks");
  c_pred->add_option("--vsm", predict.vsm, "Training VSM (JSON)")->required()->check(CLI::ExistingFile);
  c_pred->add_option("--vocab", predict.vocab, "Vocabulary TSV")->required()->check(CLI::ExistingFile);
  c_pred->add_option("--corpus", predict.corpus, "Tracks to predict (corpus TSV)")->required()->check(CLI::ExistingFile);
  c_pred->add_option("--method", predict.method, "act | svd | nmf | plsa | vsm");
  c_pred->add_option("--model", predict.model, "ACT or semantic model (JSON)")->check(CLI::ExistingFile);
  c_pred->add_option("--proxy", predict.proxy, "Dimension proxy TSV (baselines)")->check(CLI::ExistingFile);
  c_pred->add_option("--terms", predict.terms, "Extra term scales")->delimiter(',');
  add_output(c_pred, predict.out);

  Hopkins hopkins;
  auto* c_hop = app.add_subcommand("hopkins", "Clusterability of track positions per rank");
  c_hop->add_option("--vsm", hopkins.vsm, "VSM (JSON)")->required()->check(CLI::ExistingFile);
  c_hop->add_option("--k", hopkins.k_list, "Comma-separated ranks")->delimiter(',');
  c_hop->add_flag("--include-full", hopkins.include_full, "Also embed the raw TF-IDF distances (k = |terms|)");
  c_hop->add_option("--schedule", hopkins.schedule, "TERMS:TRACKS,... (default 2:2048,...,10:8)");
  c_hop->add_option("--runs", hopkins.runs, "Runs");
  c_hop->add_option("--seed", hopkins.seed, "Seed");
  c_hop->add_option("--restarts", hopkins.restarts, "MDS restarts");
  c_hop->add_option("--mds-max-iter", hopkins.max_iter, "MDS iterations per restart");
  add_output(c_hop, hopkins.out);

  Evaluate evaluate;
  auto* c_eval = app.add_subcommand("evaluate", "Correlate predictions with listener ratings");
  evaluate.in.add_to(c_eval);
  c_eval->add_option("--method", evaluate.method, "act | svd | nmf | plsa | vsm");
  c_eval->add_option("--max-iter", evaluate.max_iter, "NMF/PLSA iteration cap");
  c_eval->add_option("--tol", evaluate.tol, "NMF/PLSA relative improvement threshold");
  add_output(c_eval, evaluate.out);

  Ablate ablate;
  auto* c_abl = app.add_subcommand("ablate", "Tag-sparsity ablation of ACT predictions");
  ablate.in.add_to(c_abl);
  c_abl->add_option("--runs", ablate.runs, "Runs");
  c_abl->add_option("--levels", ablate.levels, "Mean terms-per-track checkpoints")->delimiter(',');
  add_output(c_abl, ablate.out);

  Proxy proxy;
  auto* c_proxy = app.add_subcommand("proxy", "Pick the term closest to each mood axis");
  c_proxy->add_option("--act", proxy.act, "ACT model (JSON)")->required()->check(CLI::ExistingFile);
  c_proxy->add_option("--vsm", proxy.vsm, "VSM (JSON)")->required()->check(CLI::ExistingFile);
  c_proxy->add_option("--min-share", proxy.min_share, "Minimum share of tracks per term");
  add_output(c_proxy, proxy.out);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << one_line(e.what()) << '\n';
    return 2;
  }

  try {
    if (c_build->parsed()) build.run();
    else if (c_fit->parsed()) fit.run();
    else if (c_dissim->parsed()) dissim.run();
    else if (c_mds->parsed()) mds.run();
    else if (c_act->parsed()) actfit.run();
    else if (c_pred->parsed()) predict.run();
    else if (c_hop->parsed()) hopkins.run();
    else if (c_eval->parsed()) evaluate.run();
    else if (c_abl->parsed()) ablate.run();
    else if (c_proxy->parsed()) proxy.run();
  } catch (const UsageError& e) {
    err << "error: usage: " << one_line(e.what()) << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.token() << ": " << one_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}

}  // namespace act::cli
