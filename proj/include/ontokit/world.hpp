#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ontokit/model.hpp"

namespace ontokit {

struct Individual {
    std::string id;                 // "<Kind>_<i>"
    std::string kind;               // identity-supplying type (Kind, Relator, Event or Mode)
    std::vector<std::string> types; // every instantiated classifier, sorted, includes kind

    bool operator==(const Individual&) const = default;
};

struct Link {
    std::string relation;
    std::string source;
    std::string target;

    auto operator<=>(const Link&) const = default;
};

// Value of a quality for one bearer: the integer itself for ordered spaces,
// the label index for nominal ones.
struct QualityValue {
    std::string quality;
    std::string bearer;
    std::int64_t value = 0;

    auto operator<=>(const QualityValue&) const = default;
};

/// A finite snapshot interpretation of a model.
struct InstanceWorld {
    std::vector<Individual> individuals;     // canonical order
    std::vector<Link> links;                 // sorted
    std::vector<QualityValue> qualityValues; // sorted

    const Individual* find(std::string_view id) const;
    bool instantiates(std::string_view id, std::string_view type) const;
    std::vector<std::string> members(std::string_view type) const;
    std::optional<std::int64_t> value(std::string_view quality, std::string_view bearer) const;

    bool operator==(const InstanceWorld&) const = default;
};

struct Scope {
    static constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();

    std::map<std::string, int, std::less<>> perClassifier;
    int defaultCount = 2;
    // Textual values ("0", "2", or nominal labels); defaults to the first
    // three points of the quality's space.
    std::map<std::string, std::vector<std::string>, std::less<>> qualityValues;
    std::size_t worldLimit = 100;

    // Bound for a classifier: explicit entry, else defaultCount.
    int bound(std::string_view classifier) const;
    bool explicitly_bounded(std::string_view classifier) const;
};

struct TypeAtom {
    std::string var;
    std::string classifier;
    bool operator==(const TypeAtom&) const = default;
};

struct LinkAtom {
    std::string relation;
    std::string source;
    std::string target;
    bool operator==(const LinkAtom&) const = default;
};

// Existentially closed conjunction of typing and link atoms.
struct Goal {
    std::vector<TypeAtom> types;
    std::vector<LinkAtom> links;

    // "x:Patient, t:Treatment, participatesPatient(t,x)". Throws InvalidGoal.
    static Goal parse(std::string_view text);
    std::string str() const;
    std::vector<std::string> variables() const; // sorted, unique
};

// Checks goal variables against the model: every variable typed, every
// classifier and relation declared. Throws InvalidGoal.
void validate_goal(const Model& model, const Goal& goal);

// Some assignment of the goal variables to individuals satisfies every atom.
// Comparative link atoms are evaluated from quality values.
bool satisfies(const Model& model, const InstanceWorld& world, const Goal& goal);

std::string world_to_json(const Model& model, const InstanceWorld& world, int indent = 2);
std::string worlds_to_json(const Model& model, const std::vector<InstanceWorld>& worlds, bool exhaustive);
std::string world_to_dot(const Model& model, const InstanceWorld& world, std::string_view graphName = "world");

/// Independent checker of every snapshot invariant: typing and upward
/// closure, unique kind, role justification, multiplicities, derived
/// material links and their derivation counts, generalization sets,
/// abstractness, and quality values. Returns human-readable violations.
std::vector<std::string> validate_world(const Model& model, const InstanceWorld& world);

} // namespace ontokit
