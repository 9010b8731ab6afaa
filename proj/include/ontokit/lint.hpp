#pragma once

#include <vector>

#include "ontokit/diagnostic.hpp"
#include "ontokit/finder.hpp"
#include "ontokit/model.hpp"
#include "ontokit/world.hpp"

namespace ontokit {

struct AntiPatternInfo {
    std::string_view id;
    std::string_view name;
    std::string_view summary;
};

// AP1, AP2.
const std::vector<AntiPatternInfo>& antipattern_catalog();

/// Structural matches of the anti-pattern catalog, each explained by the
/// world finder: a Warning carrying a witness world when one exists in
/// scope, an Info note otherwise. Sorted like check().
/// Throws IllFormedModel when check() reports errors, plus finder errors.
std::vector<Diagnostic> lint(const Model& model, const Scope& scope, const FinderOptions& options = {});

// Can an individual instantiate both `a` and `b`? Some sortals below each
// share a kind and no disjoint generalization set separates them.
bool extensions_may_overlap(const Model& model, std::string_view a, std::string_view b);

} // namespace ontokit
