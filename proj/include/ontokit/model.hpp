#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ontokit/error.hpp"

namespace ontokit {

struct SourceSpan {
    int line = 1;
    int column = 1;
    int length = 0;

    auto operator<=>(const SourceSpan&) const = default;
};

enum class Stereotype {
    Kind,
    Subkind,
    Phase,
    Role,
    RoleMixin,
    HistoricalRole,
    HistoricalRoleMixin,
    Category,
    Relator,
    Mode,
    Quality,
    Event,
};

enum class Rigidity { Rigid, AntiRigid };

enum class RelationKind {
    Material,
    Comparative,
    Internal,
    Mediation,
    Characterization,
    Participation,
};

// Ordering used by a comparative relation to read its quality values.
// Desc relates x to y when x's value is greater; the OrEqual variants admit ties.
enum class Direction { Asc, Desc, AscOrEqual, DescOrEqual };

std::string_view to_string(Stereotype s);
std::string_view to_string(RelationKind k);
std::string_view to_string(Direction d);
std::string_view to_string(Rigidity r);
std::optional<Stereotype> parse_stereotype(std::string_view s);
std::optional<RelationKind> parse_relation_kind(std::string_view s);
std::optional<Direction> parse_direction(std::string_view s);

Rigidity rigidity(Stereotype s);
bool is_sortal(Stereotype s);        // Kind, Subkind, Phase, Role, HistoricalRole
bool is_non_sortal(Stereotype s);    // Category, RoleMixin, HistoricalRoleMixin
bool is_relational_role(Stereotype s); // the four role-like stereotypes
bool is_strict(Direction d);

struct Multiplicity {
    static constexpr std::int64_t kUnbounded = -1;

    std::int64_t min = 0;
    std::int64_t max = kUnbounded;

    bool unbounded() const { return max == kUnbounded; }
    bool admits(std::int64_t n) const { return n >= min && (unbounded() || n <= max); }
    std::string str() const; // "1..*"

    static std::optional<Multiplicity> parse(std::string_view text);

    auto operator<=>(const Multiplicity&) const = default;
};

struct Classifier {
    std::string name;
    Stereotype stereotype = Stereotype::Kind;
    std::vector<std::string> parents; // sorted, unique
    bool isAbstract = false;
    SourceSpan span;

    bool operator==(const Classifier&) const = default;
};

struct Derivation {
    std::string relator;
    Multiplicity mult;
    bool operator==(const Derivation&) const = default;
};

struct QualityRef {
    std::string quality;
    Direction direction = Direction::Desc;
    bool operator==(const QualityRef&) const = default;
};

// Binary relation `source [sourceMult] -- [targetMult] target`.
// sourceMult bounds the sources linked to one target, targetMult the
// targets linked to one source. Comparatives carry no multiplicities.
struct RelationDecl {
    std::string name;
    RelationKind kind = RelationKind::Material;
    std::string source;
    std::string target;
    Multiplicity sourceMult;
    Multiplicity targetMult;
    std::optional<Derivation> derivedFrom;
    std::optional<QualityRef> via;
    SourceSpan span;

    bool operator==(const RelationDecl&) const = default;
};

struct GeneralizationSet {
    std::string name;
    std::string general;
    std::vector<std::string> specifics; // sorted
    bool isDisjoint = false;
    bool isComplete = false;
    SourceSpan span;

    bool operator==(const GeneralizationSet&) const = default;
};

struct QualitySpace {
    enum class Kind { OrderedInteger, Nominal };

    std::string owner;
    Kind kind = Kind::OrderedInteger;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::vector<std::string> labels;
    SourceSpan span;

    bool ordered() const { return kind == Kind::OrderedInteger; }
    std::size_t size() const;
    bool operator==(const QualitySpace&) const = default;
};

// Raw declarations, as produced by the parser or JSON loader before validation.
struct ModelData {
    std::string name;
    SourceSpan span;
    std::vector<Classifier> classifiers;
    std::vector<RelationDecl> relations;
    std::vector<GeneralizationSet> generalizationSets;
    std::vector<QualitySpace> spaces;
};

struct StructuralError {
    SourceSpan span;
    std::string message;
};

// Structural invariants of classifiers, relations, sets and spaces:
// unique names, resolved references, acyclic specialization, stereotype
// constraints on relation ends. Empty result means Model{data} is safe.
std::vector<StructuralError> validate_structure(const ModelData& data);

// Immutable conceptual model. Declarations are stored sorted by name so that
// two structurally equal models compare equal regardless of source order.
class Model {
public:
    Model() = default;
    // Throws OntoError(IllFormedModel) when validate_structure reports errors.
    explicit Model(ModelData data);

    const std::string& name() const { return data_.name; }
    const SourceSpan& span() const { return data_.span; }
    const std::vector<Classifier>& classifiers() const { return data_.classifiers; }
    const std::vector<RelationDecl>& relations() const { return data_.relations; }
    const std::vector<GeneralizationSet>& generalizationSets() const { return data_.generalizationSets; }
    const std::vector<QualitySpace>& spaces() const { return data_.spaces; }
    const ModelData& data() const { return data_; }

    const Classifier* find_classifier(std::string_view name) const;
    const RelationDecl* find_relation(std::string_view name) const;
    const QualitySpace* find_space(std::string_view quality) const;
    const Classifier& classifier(std::string_view name) const; // throws UnknownClassifier
    const RelationDecl& relation(std::string_view name) const; // throws UnknownRelation

    // Strict ancestors / descendants via parents (transitive closure).
    const std::set<std::string>& ancestors(std::string_view name) const;
    const std::set<std::string>& descendants(std::string_view name) const;
    // a is a strict specialization of b.
    bool specializes(std::string_view a, std::string_view b) const;
    // a == b, or one specializes the other.
    bool comparable(std::string_view a, std::string_view b) const;

    bool operator==(const Model& other) const;

private:
    ModelData data_;
    std::map<std::string, std::size_t, std::less<>> classifierIndex_;
    std::map<std::string, std::size_t, std::less<>> relationIndex_;
    std::map<std::string, std::set<std::string>, std::less<>> ancestors_;
    std::map<std::string, std::set<std::string>, std::less<>> descendants_;
};

Rigidity rigidity(const Classifier& c);

// The unique Kind reached from a sortal via parents (the sortal itself if it
// is a Kind). Throws NotSortal, NoKind or AmbiguousKind.
std::string ultimate_kind(const Model& model, std::string_view classifier);

// Non-throwing variant: all Kind classifiers among {c} and its ancestors.
std::vector<std::string> kind_ancestors(const Model& model, std::string_view classifier);

} // namespace ontokit
