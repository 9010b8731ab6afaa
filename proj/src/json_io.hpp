#pragma once

// JSON forms of single declarations, shared by the model emitter and the
// plan / report writers.

#include <json.hpp>

#include "ontokit/model.hpp"

namespace ontokit::detail {

nlohmann::json span_json(const SourceSpan& s);
nlohmann::json classifier_json(const Classifier& c);
nlohmann::json relation_json(const RelationDecl& r);
nlohmann::json genset_json(const GeneralizationSet& g);
nlohmann::json space_json(const QualitySpace& sp);

} // namespace ontokit::detail
