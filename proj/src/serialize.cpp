#include "act/serialize.hpp"

#include "act/error.hpp"

namespace act {

namespace {

Json matrix_rows(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Eigen::MatrixXd matrix_from_rows(const Json& rows, Eigen::Index cols_hint = -1) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::Index cols = n ? static_cast<Eigen::Index>(rows.at(0).size()) : std::max<Eigen::Index>(cols_hint, 0);
  Eigen::MatrixXd m(n, cols);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) throw Error(ErrorCode::Schema, "ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const Json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

void check_header(const Json& doc, const char* kind) {
  if (!doc.is_object()) throw Error(ErrorCode::Schema, std::string(kind) + ": document is not an object");
  if (doc.value("version", -1) != kFormatVersion)
    throw Error(ErrorCode::Schema, std::string(kind) + ": unsupported format version");
}

// Runs a parser, converting JSON access failures into schema errors.
template <typename F>
auto guarded(const char* kind, F&& parse) {
  try {
    return parse();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Schema, std::string(kind) + ": " + e.what());
  }
}

Json model_header(const char* type, const std::vector<std::string>& terms, Eigen::Index k) {
  Json j;
  j["version"] = kFormatVersion;
  j["model_type"] = type;
  j["num_terms"] = terms.size();
  j["k"] = k;
  j["terms"] = terms;
  return j;
}

Json row_major(const Eigen::MatrixXd& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  j["data"] = std::move(data);
  return j;
}

Eigen::MatrixXd from_row_major(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw Error(ErrorCode::Schema, "factor array length does not match its shape");
  Eigen::MatrixXd m(rows, cols);
  std::size_t p = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data.at(p++).get<double>();
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------

Json to_json(const TermDocMatrix& matrix) {
  Json j;
  j["version"] = kFormatVersion;
  j["terms"] = matrix.terms();
  j["track_ids"] = matrix.track_ids();
  j["doc_freq"] = matrix.doc_freq();
  j["num_tracks"] = matrix.num_tracks();
  Json cells = Json::array();
  const auto& sp = matrix.cells();
  for (Eigen::Index c = 0; c < sp.outerSize(); ++c)
    for (TermDocMatrix::Sparse::InnerIterator it(sp, c); it; ++it)
      cells.push_back(Json::array({it.row(), it.col(), it.value()}));
  j["cells"] = std::move(cells);
  return j;
}

TermDocMatrix term_doc_matrix_from_json(const Json& doc) {
  return guarded("vsm", [&] {
    check_header(doc, "vsm");
    auto terms = doc.at("terms").get<std::vector<std::string>>();
    auto tracks = doc.at("track_ids").get<std::vector<std::string>>();
    std::vector<Eigen::Triplet<double>> triplets;
    for (const auto& cell : doc.at("cells")) {
      if (cell.size() != 3) throw Error(ErrorCode::Schema, "vsm: cells must be [i, j, weight] triples");
      const auto i = cell.at(0).get<Eigen::Index>(), jj = cell.at(1).get<Eigen::Index>();
      if (i < 0 || jj < 0 || i >= static_cast<Eigen::Index>(terms.size()) ||
          jj >= static_cast<Eigen::Index>(tracks.size()))
        throw Error(ErrorCode::Schema, "vsm: cell index out of range");
      triplets.emplace_back(i, jj, cell.at(2).get<double>());
    }
    TermDocMatrix::Sparse cells(static_cast<Eigen::Index>(terms.size()), static_cast<Eigen::Index>(tracks.size()));
    cells.setFromTriplets(triplets.begin(), triplets.end());
    if (static_cast<std::size_t>(cells.nonZeros()) != triplets.size())
      throw Error(ErrorCode::Schema, "vsm: duplicate cells");
    return TermDocMatrix(std::move(terms), std::move(tracks), std::move(cells),
                         doc.at("doc_freq").get<std::vector<std::size_t>>(),
                         doc.at("num_tracks").get<std::size_t>());
  });
}

Json to_json(const SvdModel& model) {
  Json j = model_header("svd", model.terms, model.rank());
  j["num_tracks"] = model.v.rows();
  j["U"] = row_major(model.u);
  j["S"] = vector_json(model.s);
  j["V"] = row_major(model.v);
  return j;
}

Json to_json(const NmfModel& model) {
  Json j = model_header("nmf", model.terms, model.rank());
  j["num_tracks"] = model.h.cols();
  j["seed"] = model.seed;
  j["W"] = row_major(model.w);
  j["H"] = row_major(model.h);
  j["objective_trace"] = model.objective_trace;
  return j;
}

Json to_json(const PlsaModel& model) {
  Json j = model_header("plsa", model.terms, model.rank());
  j["num_tracks"] = model.p_z_given_t.cols();
  j["seed"] = model.seed;
  j["p_w_given_z"] = row_major(model.p_w_given_z);
  j["p_z_given_t"] = row_major(model.p_z_given_t);
  j["p_t"] = vector_json(model.p_t);
  j["loglik_trace"] = model.loglik_trace;
  return j;
}

SemanticModel semantic_model_from_json(const Json& doc) {
  return guarded("model", [&]() -> SemanticModel {
    check_header(doc, "model");
    const auto type = doc.at("model_type").get<std::string>();
    auto terms = doc.at("terms").get<std::vector<std::string>>();
    auto check_terms = [&](Eigen::Index rows) {
      if (rows != static_cast<Eigen::Index>(terms.size()))
        throw Error(ErrorCode::Schema, "model: factor rows do not match the term list");
    };
    if (type == "svd") {
      SvdModel m{terms, from_row_major(doc.at("U")), vector_from_json(doc.at("S")), from_row_major(doc.at("V"))};
      check_terms(m.u.rows());
      if (m.u.cols() != m.s.size() || m.v.cols() != m.s.size())
        throw Error(ErrorCode::Schema, "model: inconsistent SVD rank");
      return m;
    }
    if (type == "nmf") {
      NmfModel m{terms, from_row_major(doc.at("W")), from_row_major(doc.at("H")),
                 doc.at("objective_trace").get<std::vector<double>>(), doc.at("seed").get<std::uint64_t>()};
      check_terms(m.w.rows());
      if (m.w.cols() != m.h.rows()) throw Error(ErrorCode::Schema, "model: inconsistent NMF rank");
      return m;
    }
    if (type == "plsa") {
      PlsaModel m{terms,
                  from_row_major(doc.at("p_w_given_z")),
                  from_row_major(doc.at("p_z_given_t")),
                  vector_from_json(doc.at("p_t")),
                  doc.at("loglik_trace").get<std::vector<double>>(),
                  doc.at("seed").get<std::uint64_t>()};
      check_terms(m.p_w_given_z.rows());
      if (m.p_w_given_z.cols() != m.p_z_given_t.rows())
        throw Error(ErrorCode::Schema, "model: inconsistent PLSA rank");
      return m;
    }
    throw Error(ErrorCode::Schema, "model: unknown model_type '" + type + "'");
  });
}

Json to_json(const Dissimilarity& d) {
  Json j;
  j["version"] = kFormatVersion;
  j["kind"] = "dissimilarity";
  j["terms"] = d.terms;
  j["values"] = matrix_rows(d.values);
  return j;
}

Dissimilarity dissimilarity_from_json(const Json& doc) {
  return guarded("dissimilarity", [&] {
    check_header(doc, "dissimilarity");
    Dissimilarity d{doc.at("terms").get<std::vector<std::string>>(), matrix_from_rows(doc.at("values"))};
    if (d.values.rows() != static_cast<Eigen::Index>(d.terms.size()) || d.values.rows() != d.values.cols())
      throw Error(ErrorCode::Schema, "dissimilarity: matrix shape does not match the term list");
    return d;
  });
}

Json to_json(const MdsEmbedding& e) {
  Json j;
  j["version"] = kFormatVersion;
  j["kind"] = "mds";
  j["dims"] = e.dims();
  j["terms"] = e.terms;
  j["coords"] = matrix_rows(e.coords);
  j["stress1"] = e.stress1;
  j["restarts_used"] = e.restarts_used;
  j["best_restart"] = e.best_restart;
  j["stress_trace"] = e.stress_trace;
  return j;
}

MdsEmbedding mds_embedding_from_json(const Json& doc) {
  return guarded("mds", [&] {
    check_header(doc, "mds");
    MdsEmbedding e;
    e.terms = doc.at("terms").get<std::vector<std::string>>();
    e.coords = matrix_from_rows(doc.at("coords"), doc.at("dims").get<Eigen::Index>());
    e.stress1 = doc.at("stress1").get<double>();
    e.restarts_used = doc.at("restarts_used").get<int>();
    e.best_restart = doc.value("best_restart", 0);
    e.stress_trace = doc.value("stress_trace", std::vector<double>{});
    if (e.coords.rows() != static_cast<Eigen::Index>(e.terms.size()))
      throw Error(ErrorCode::Schema, "mds: coordinates do not match the term list");
    return e;
  });
}

Json to_json(const ActModel& act) {
  Json j;
  j["version"] = kFormatVersion;
  j["kind"] = "act";
  j["B"] = act.scale;
  Json t = Json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) t.push_back(act.rotation(r, c));
  j["T"] = std::move(t);
  j["C"] = Json::array({act.translation(0), act.translation(1), act.translation(2)});
  j["terms"] = act.terms;
  j["source_coords"] = matrix_rows(act.source_coords);
  j["term_coords"] = matrix_rows(act.term_coords);
  Json matched = Json::array();
  for (const auto& [term, p] : act.matched_terms) matched.push_back(Json::array({term, p.valence, p.arousal}));
  j["matched_terms"] = std::move(matched);
  j["fit_X2_raw"] = act.fit_x2_raw;
  j["fit_X2_standardized"] = act.fit_x2_standardized;
  j["provenance"] = {{"variant", std::string(to_string(act.provenance.variant))},
                     {"k", act.provenance.k},
                     {"seed", act.provenance.seed},
                     {"mds_stress1", act.provenance.mds_stress1}};
  return j;
}

ActModel act_model_from_json(const Json& doc) {
  return guarded("act", [&] {
    check_header(doc, "act");
    ActModel act;
    act.scale = doc.at("B").get<double>();
    const auto& t = doc.at("T");
    const auto& c = doc.at("C");
    if (t.size() != 9 || c.size() != 3) throw Error(ErrorCode::Schema, "act: T needs 9 values and C 3");
    for (int r = 0; r < 3; ++r)
      for (int col = 0; col < 3; ++col) act.rotation(r, col) = t.at(static_cast<std::size_t>(r * 3 + col)).get<double>();
    for (int i = 0; i < 3; ++i) act.translation(i) = c.at(static_cast<std::size_t>(i)).get<double>();
    act.terms = doc.at("terms").get<std::vector<std::string>>();
    act.source_coords = matrix_from_rows(doc.at("source_coords"), 3);
    act.term_coords = matrix_from_rows(doc.at("term_coords"), 3);
    for (const auto& m : doc.at("matched_terms"))
      act.matched_terms.emplace_back(m.at(0).get<std::string>(),
                                     ReferencePoint{m.at(1).get<double>(), m.at(2).get<double>()});
    act.fit_x2_raw = doc.at("fit_X2_raw").get<double>();
    act.fit_x2_standardized = doc.at("fit_X2_standardized").get<double>();
    const auto& prov = doc.at("provenance");
    act.provenance.variant = parse_variant(prov.at("variant").get<std::string>());
    act.provenance.k = prov.at("k").get<Eigen::Index>();
    act.provenance.seed = prov.at("seed").get<std::uint64_t>();
    act.provenance.mds_stress1 = prov.value("mds_stress1", 0.0);
    const auto n = static_cast<Eigen::Index>(act.terms.size());
    if (act.term_coords.rows() != n || act.source_coords.rows() != n ||
        act.term_coords.cols() != 3 || act.source_coords.cols() != 3)
      throw Error(ErrorCode::Schema, "act: coordinates do not match the term list");
    return act;
  });
}

}  // namespace act
