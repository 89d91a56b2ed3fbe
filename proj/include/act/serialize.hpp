#pragma once

#include "act/corpus.hpp"
#include "act/factorize.hpp"
#include "act/moodspace.hpp"

#include <json.hpp>

#include <string>
#include <variant>

namespace act {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

Json to_json(const TermDocMatrix& matrix);
TermDocMatrix term_doc_matrix_from_json(const Json& doc);

using SemanticModel = std::variant<SvdModel, NmfModel, PlsaModel>;

Json to_json(const SvdModel& model);
Json to_json(const NmfModel& model);
Json to_json(const PlsaModel& model);
/// Dispatches on the `model_type` field.
SemanticModel semantic_model_from_json(const Json& doc);

/// Symmetric dissimilarity matrix with its term labels.
struct Dissimilarity {
  std::vector<std::string> terms;
  Eigen::MatrixXd values;
};

Json to_json(const Dissimilarity& d);
Dissimilarity dissimilarity_from_json(const Json& doc);

Json to_json(const MdsEmbedding& embedding);
MdsEmbedding mds_embedding_from_json(const Json& doc);

Json to_json(const ActModel& act);
ActModel act_model_from_json(const Json& doc);

}  // namespace act
