#include "act/error.hpp"
#include "act/serialize.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace act;

namespace {

Eigen::MatrixXd positive(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd m(r, c);
  for (auto& x : m.reshaped()) x = u(rng) < 0.4 ? 1.0 / 3.0 + u(rng) : 0.0;
  for (Eigen::Index j = 0; j < c; ++j) m(j % r, j) = 0.7 + u(rng);
  return m;
}

template <typename T, typename Read>
auto round_trip(const T& value, Read read) {
  return read(Json::parse(to_json(value).dump()));
}

}  // namespace

TEST(Serialize, TermDocMatrixRoundTripIsExact) {
  std::mt19937_64 rng(1);
  auto m = TermDocMatrix::from_dense(positive(rng, 7, 20));
  auto j = to_json(m);
  EXPECT_EQ(j["version"], kFormatVersion);
  auto back = round_trip(m, term_doc_matrix_from_json);
  EXPECT_TRUE(back.dense() == m.dense());
  EXPECT_EQ(back.terms(), m.terms());
  EXPECT_EQ(back.doc_freq(), m.doc_freq());
  EXPECT_EQ(back.num_tracks(), m.num_tracks());
}

TEST(Serialize, ModelsRoundTrip) {
  std::mt19937_64 rng(2);
  Eigen::MatrixXd n = positive(rng, 8, 30);
  auto svd = svd_fit(n, 3);
  auto nmf = nmf_fit(n, 3, {20, 0.0}, 4);
  auto plsa = plsa_fit(n, 3, {20, 0.0}, 4);

  auto s = std::get<SvdModel>(round_trip(svd, semantic_model_from_json));
  EXPECT_TRUE(s.u == svd.u && s.s == svd.s && s.v == svd.v);
  auto f = std::get<NmfModel>(round_trip(nmf, semantic_model_from_json));
  EXPECT_TRUE(f.w == nmf.w && f.h == nmf.h);
  EXPECT_EQ(f.objective_trace, nmf.objective_trace);
  EXPECT_EQ(f.seed, 4u);
  auto p = std::get<PlsaModel>(round_trip(plsa, semantic_model_from_json));
  EXPECT_TRUE(p.p_w_given_z == plsa.p_w_given_z && p.p_z_given_t == plsa.p_z_given_t && p.p_t == plsa.p_t);
  EXPECT_EQ(to_json(nmf)["model_type"], "nmf");
}

TEST(Serialize, EmbeddingAndActRoundTrip) {
  std::mt19937_64 rng(3);
  MdsEmbedding e;
  e.terms = {"a", "b", "c", "d"};
  e.coords = positive(rng, 4, 3);
  e.coords.rowwise() -= e.coords.colwise().mean();
  e.stress1 = 0.123;
  e.stress_trace = {0.5, 0.2, 0.123};
  auto eb = round_trip(e, mds_embedding_from_json);
  EXPECT_TRUE(eb.coords == e.coords);
  EXPECT_EQ(eb.stress_trace, e.stress_trace);

  ReferenceSpace ref("r");
  ref.add("a", {0.9, 0.1});
  ref.add("b", {-0.5, 0.6});
  ref.add("c", {0.1, -0.7});
  auto act = procrustes_fit(e, ref);
  auto ab = round_trip(act, act_model_from_json);
  EXPECT_EQ(ab.scale, act.scale);
  EXPECT_TRUE(ab.rotation == act.rotation);
  EXPECT_TRUE(ab.translation == act.translation);
  EXPECT_TRUE(ab.term_coords == act.term_coords);
  EXPECT_EQ(ab.matched_terms.size(), 3u);
  EXPECT_EQ(ab.fit_x2_raw, act.fit_x2_raw);
  EXPECT_EQ(ab.fit_x2_standardized, act.fit_x2_standardized);
  auto j = to_json(act);
  EXPECT_EQ(j["T"].size(), 9u);
}

TEST(Serialize, SchemaErrors) {
  try {
    term_doc_matrix_from_json(Json::parse(R"({"version": 1, "terms": 3})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Schema);
  }
  EXPECT_THROW(semantic_model_from_json(Json::parse(R"({"version": 1, "model_type": "lda"})")), Error);
  EXPECT_THROW(act_model_from_json(Json::parse("[]")), Error);
}
