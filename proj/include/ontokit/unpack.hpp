#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ontokit/model.hpp"

namespace ontokit {

/// A rewrite of one relation. `newRelations` holds the added relations and
/// the rewritten target relation; `replaces` names the declarations it
/// supersedes.
struct UnpackPlan {
    std::string targetRelation;
    std::vector<Classifier> newClassifiers;
    std::vector<RelationDecl> newRelations;
    std::vector<QualitySpace> newSpaces;
    std::vector<std::string> replaces;
};

/// Relator pattern. Adds a relator, one role per end (reusing ends that are
/// already role-like), two mediations `[1..*] -- [1..1]`, and derives the
/// material relation from the relator with multiplicity [1..*]. The material
/// ends are moved onto the roles.
/// Throws NotMaterial (also for unknown relations), AlreadyDerived, NameClash.
UnpackPlan unpack_material(const Model& model, std::string_view relation, std::string_view relatorName,
                           const std::pair<std::string, std::string>& roleNames);

/// Comparative pattern. Grounds `relation` (a comparative, or a material
/// relation without a relator) in an ordered quality characterizing the
/// shared bearer of its ends. An existing ordered quality of that name is
/// reused. Throws NotComparative, UnorderedSpace, NameClash, NoSharedBearer.
UnpackPlan unpack_comparative(const Model& model, std::string_view relation, std::string_view qualityName,
                              const QualitySpace& space, Direction direction);

/// New model with the plan applied. Throws IllFormedModel if the result is
/// structurally invalid (e.g. a name clash introduced by hand-made plans).
Model apply_plan(const Model& model, const UnpackPlan& plan);

struct MaterialCardinalities {
    std::string mediationA; // relator -> A
    std::string mediationB; // relator -> B
    std::string typeA;
    std::string typeB;
    Multiplicity endA;     // A individuals related to one B
    Multiplicity endB;     // B individuals related to one A
    Multiplicity perTuple; // relators grounding one related (a, b)
};

/// Bounds entailed for the material relation derived from a binary relator.
/// With `relator [nX..NX] -- [mX..MX] X` for each side:
///   endB = [nA >= 1 ? mB : 0 .. NA * MB], endA symmetric,
///   perTuple = [1 .. min(NA, NB)] (a derived tuple has at least one relator).
/// When a material relation is derived from the relator its source end is A.
/// Throws UnknownClassifier, NotBinaryRelator.
MaterialCardinalities derive_material_cardinalities(const Model& model, std::string_view relator);

/// Intersects the end and derivation multiplicities of a derived material
/// relation with the entailed bounds. Ends whose intersection would be empty
/// are left as declared.
Model tighten_material(const Model& model, std::string_view relation);

std::string plan_to_json(const UnpackPlan& plan);
std::string cardinalities_to_json(std::string_view relator, const MaterialCardinalities& c);

} // namespace ontokit
