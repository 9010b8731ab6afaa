#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ontokit/diagnostic.hpp"
#include "ontokit/model.hpp"

namespace ontokit {

struct RuleInfo {
    std::string_view id;
    Severity severity;
    std::string_view summary;
};

// R1..R10 in catalog order.
const std::vector<RuleInfo>& rule_catalog();

/// Runs the whole well-formedness catalog. Diagnostics are sorted; the list
/// is empty iff the model is well-formed.
std::vector<Diagnostic> check(const Model& model);

/// Mediations of a material relation's derivedFrom relator that ground its
/// source and target ends, as (sourceMediation, targetMediation). A single
/// mediation may ground both ends (e.g. a marriage mediating two persons).
/// nullopt when the relator lacks a mediation compatible with either end.
std::optional<std::pair<std::string, std::string>> derivation_mediations(const Model& model,
                                                                         const RelationDecl& material);

// Does quality `quality` reach instances of `endType`, either by
// characterizing a compatible type directly or through a mode that does?
bool quality_reaches(const Model& model, std::string_view quality, std::string_view endType);

} // namespace ontokit
