#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ontokit/model.hpp"
#include "ontokit/world.hpp"

namespace ontokit {

struct FinderOptions {
    int maxBaseScope = 5;      // per Kind; symmetry breaking permutes these
    int maxDependentScope = 8; // per Relator / Event / Mode
    std::uint64_t nodeBudget = 200'000'000;
    bool parallel = true;      // false selects the serial reference loop
};

struct Enumeration {
    std::vector<InstanceWorld> worlds; // canonical order, at most scope.worldLimit
    std::size_t total = 0;             // non-isomorphic worlds in scope
    bool exhaustive = true;            // total <= worldLimit
};

/// Bounded model finding by explicit backtracking. Worlds are pairwise
/// non-isomorphic and returned in canonical order: fewer individuals first,
/// then by their canonical encoding. Output does not depend on `parallel`.
/// Throws IllFormedModel when check() reports errors, ScopeTooLarge past
/// the option caps, InvalidScope for malformed scopes and Unsupported for
/// dependence chains the finder does not model (e.g. a mode of a relator).
Enumeration enumerate(const Model& model, const Scope& scope, const FinderOptions& options = {});

std::vector<InstanceWorld> enumerate_worlds(const Model& model, const Scope& scope, const FinderOptions& options = {});

/// Canonically first in-scope world satisfying `goal`, if any.
std::optional<InstanceWorld> find_witness(const Model& model, const Scope& scope, const Goal& goal,
                                          const FinderOptions& options = {});

/// Visits every in-scope world (ignores worldLimit) serially in search order.
void for_each_world(const Model& model, const Scope& scope, const std::function<void(const InstanceWorld&)>& visit,
                    const FinderOptions& options = {});

using IdPair = std::pair<std::string, std::string>;

/// Pairs related by a comparative in `world`. For each end individual the
/// compared values are its own values of the quality plus those of the modes
/// characterizing it; (x, y) holds when both have values and some value of
/// x beats every value of y under the declared direction. Internal
/// relations between one ordered quality relate its values present in the
/// world ("Q=v" pseudo-ids) by strict descending order.
std::set<IdPair> eval_comparative(const InstanceWorld& world, const Model& model, std::string_view relation);

struct Counterexample {
    InstanceWorld world;
    std::vector<std::string> individuals; // offending pair or triple
};

struct MetaPropertyReport {
    bool irreflexive = true;
    bool asymmetric = true; // checked on distinct pairs; loops are reported as irreflexivity failures
    bool transitive = true;
    std::optional<Counterexample> irreflexiveCounterexample;
    std::optional<Counterexample> asymmetricCounterexample;
    std::optional<Counterexample> transitiveCounterexample;
    std::size_t worldsChecked = 0;
};

/// Brute force over every in-scope world; each counterexample is the
/// canonically first world exhibiting the failure.
MetaPropertyReport check_metaproperties(const Model& model, std::string_view relation, const Scope& scope,
                                        const FinderOptions& options = {});

std::string metaproperties_to_json(const Model& model, std::string_view relation, const MetaPropertyReport& report);

} // namespace ontokit
