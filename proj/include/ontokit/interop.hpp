#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ontokit/model.hpp"

namespace ontokit {

enum class Verdict {
    IdentityCandidate,
    SpecializationCandidate,
    SiblingSubtypesCandidate,
    ManifestationCandidate,
    HistoricalDependenceCandidate,
    IdentityExcluded,
};

std::string_view to_string(Verdict v);

struct Correspondence {
    std::string leftModel;
    std::string left;
    std::string rightModel;
    std::string right;
    Verdict verdict = Verdict::IdentityCandidate;
    std::vector<Verdict> alternatives;
    // For specialization candidates: "left" or "right", the side read as the
    // more specific type; empty when undecided.
    std::string moreSpecific;
    std::string rationale;
};

/// Classifies each pair of types (default: every name-equal pair, in name
/// order). Verdicts are candidates for a human to confirm, never assertions.
/// Throws IllFormedModel when a model fails check(), UnknownClassifier for
/// explicit pairs naming undeclared types.
std::vector<Correspondence> compare(const Model& left, const Model& right,
                                    const std::optional<std::vector<std::pair<std::string, std::string>>>& pairs = {});

/// Declared structure around a type: one "stereotype:side:otherEnd" entry
/// for each relation touching it or one of its ancestors.
std::vector<std::string> leibniz_signature(const Model& model, std::string_view classifier);

std::string correspondences_to_json(const Model& left, const Model& right, const std::vector<Correspondence>& cs);
std::string correspondences_to_text(const std::vector<Correspondence>& cs);

} // namespace ontokit
