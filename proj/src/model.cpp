#include "ontokit/model.hpp"

#include <algorithm>
#include <charconv>
#include <functional>

namespace ontokit {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NoKind: return "NoKind";
    case ErrorCode::AmbiguousKind: return "AmbiguousKind";
    case ErrorCode::NotSortal: return "NotSortal";
    case ErrorCode::UnknownClassifier: return "UnknownClassifier";
    case ErrorCode::UnknownRelation: return "UnknownRelation";
    case ErrorCode::NotMaterial: return "NotMaterial";
    case ErrorCode::AlreadyDerived: return "AlreadyDerived";
    case ErrorCode::NameClash: return "NameClash";
    case ErrorCode::NotComparative: return "NotComparative";
    case ErrorCode::UnorderedSpace: return "UnorderedSpace";
    case ErrorCode::NoSharedBearer: return "NoSharedBearer";
    case ErrorCode::NotBinaryRelator: return "NotBinaryRelator";
    case ErrorCode::IllFormedModel: return "IllFormedModel";
    case ErrorCode::ScopeTooLarge: return "ScopeTooLarge";
    case ErrorCode::InvalidScope: return "InvalidScope";
    case ErrorCode::InvalidGoal: return "InvalidGoal";
    case ErrorCode::MissingQualityValue: return "MissingQualityValue";
    case ErrorCode::Unsupported: return "Unsupported";
    }
    return "Unknown";
}

namespace {

constexpr std::pair<Stereotype, std::string_view> kStereotypeNames[] = {
    {Stereotype::Kind, "kind"},
    {Stereotype::Subkind, "subkind"},
    {Stereotype::Phase, "phase"},
    {Stereotype::Role, "role"},
    {Stereotype::RoleMixin, "roleMixin"},
    {Stereotype::HistoricalRole, "historicalRole"},
    {Stereotype::HistoricalRoleMixin, "historicalRoleMixin"},
    {Stereotype::Category, "category"},
    {Stereotype::Relator, "relator"},
    {Stereotype::Mode, "mode"},
    {Stereotype::Quality, "quality"},
    {Stereotype::Event, "event"},
};

constexpr std::pair<RelationKind, std::string_view> kRelationNames[] = {
    {RelationKind::Material, "material"},
    {RelationKind::Comparative, "comparative"},
    {RelationKind::Internal, "internal"},
    {RelationKind::Mediation, "mediation"},
    {RelationKind::Characterization, "characterization"},
    {RelationKind::Participation, "participation"},
};

constexpr std::pair<Direction, std::string_view> kDirectionNames[] = {
    {Direction::Asc, "asc"},
    {Direction::Desc, "desc"},
    {Direction::AscOrEqual, "ascOrEqual"},
    {Direction::DescOrEqual, "descOrEqual"},
};

template <class E, std::size_t N>
std::string_view lookup_name(const std::pair<E, std::string_view> (&table)[N], E value) {
    for (const auto& [e, s] : table)
        if (e == value) return s;
    return "?";
}

template <class E, std::size_t N>
std::optional<E> lookup_value(const std::pair<E, std::string_view> (&table)[N], std::string_view s) {
    for (const auto& [e, name] : table)
        if (name == s) return e;
    return std::nullopt;
}

const std::set<std::string> kEmptySet;

} // namespace

std::string_view to_string(Stereotype s) { return lookup_name(kStereotypeNames, s); }
std::string_view to_string(RelationKind k) { return lookup_name(kRelationNames, k); }
std::string_view to_string(Direction d) { return lookup_name(kDirectionNames, d); }
std::string_view to_string(Rigidity r) { return r == Rigidity::Rigid ? "Rigid" : "AntiRigid"; }

std::optional<Stereotype> parse_stereotype(std::string_view s) { return lookup_value(kStereotypeNames, s); }
std::optional<RelationKind> parse_relation_kind(std::string_view s) { return lookup_value(kRelationNames, s); }
std::optional<Direction> parse_direction(std::string_view s) { return lookup_value(kDirectionNames, s); }

Rigidity rigidity(Stereotype s) {
    switch (s) {
    case Stereotype::Phase:
    case Stereotype::Role:
    case Stereotype::RoleMixin:
    case Stereotype::HistoricalRole:
    case Stereotype::HistoricalRoleMixin:
        return Rigidity::AntiRigid;
    default:
        return Rigidity::Rigid;
    }
}

Rigidity rigidity(const Classifier& c) { return rigidity(c.stereotype); }

bool is_sortal(Stereotype s) {
    return s == Stereotype::Kind || s == Stereotype::Subkind || s == Stereotype::Phase ||
           s == Stereotype::Role || s == Stereotype::HistoricalRole;
}

bool is_non_sortal(Stereotype s) {
    return s == Stereotype::Category || s == Stereotype::RoleMixin || s == Stereotype::HistoricalRoleMixin;
}

bool is_relational_role(Stereotype s) {
    return s == Stereotype::Role || s == Stereotype::RoleMixin || s == Stereotype::HistoricalRole ||
           s == Stereotype::HistoricalRoleMixin;
}

bool is_strict(Direction d) { return d == Direction::Asc || d == Direction::Desc; }

std::string Multiplicity::str() const {
    return std::to_string(min) + ".." + (unbounded() ? std::string("*") : std::to_string(max));
}

std::optional<Multiplicity> Multiplicity::parse(std::string_view text) {
    auto dots = text.find("..");
    if (dots == std::string_view::npos) return std::nullopt;
    auto lo = text.substr(0, dots);
    auto hi = text.substr(dots + 2);
    Multiplicity m;
    auto [p, ec] = std::from_chars(lo.data(), lo.data() + lo.size(), m.min);
    if (ec != std::errc{} || p != lo.data() + lo.size() || m.min < 0) return std::nullopt;
    if (hi == "*") {
        m.max = kUnbounded;
    } else {
        auto [q, ec2] = std::from_chars(hi.data(), hi.data() + hi.size(), m.max);
        if (ec2 != std::errc{} || q != hi.data() + hi.size() || m.max < 1 || m.max < m.min)
            return std::nullopt;
    }
    return m;
}

std::size_t QualitySpace::size() const {
    return ordered() ? static_cast<std::size_t>(hi - lo + 1) : labels.size();
}

std::vector<StructuralError> validate_structure(const ModelData& data) {
    std::vector<StructuralError> errors;
    auto fail = [&](const SourceSpan& span, std::string msg) { errors.push_back({span, std::move(msg)}); };

    std::map<std::string, const Classifier*, std::less<>> classifiers;
    for (const auto& c : data.classifiers) {
        if (!classifiers.emplace(c.name, &c).second)
            fail(c.span, "duplicate classifier '" + c.name + "'");
    }
    std::set<std::string, std::less<>> relationNames;
    for (const auto& r : data.relations) {
        if (!relationNames.insert(r.name).second) fail(r.span, "duplicate relation '" + r.name + "'");
    }

    for (const auto& c : data.classifiers) {
        for (const auto& p : c.parents) {
            if (p == c.name)
                fail(c.span, "classifier '" + c.name + "' specializes itself");
            else if (!classifiers.count(p))
                fail(c.span, "unknown classifier '" + p + "' in specializes of '" + c.name + "'");
        }
    }

    // Cycle detection over the parent graph (white/grey/black DFS).
    std::map<std::string, int, std::less<>> color;
    std::function<bool(const Classifier&)> visit = [&](const Classifier& c) {
        color[c.name] = 1;
        for (const auto& p : c.parents) {
            auto it = classifiers.find(p);
            if (it == classifiers.end() || p == c.name) continue;
            int col = color[p];
            if (col == 1) return true;
            if (col == 0 && visit(*it->second)) return true;
        }
        color[c.name] = 2;
        return false;
    };
    for (const auto& c : data.classifiers) {
        if (color[c.name] == 0 && visit(c)) {
            fail(c.span, "specialization cycle through '" + c.name + "'");
            break;
        }
    }

    auto stereo_of = [&](const std::string& n) -> std::optional<Stereotype> {
        auto it = classifiers.find(n);
        if (it == classifiers.end()) return std::nullopt;
        return it->second->stereotype;
    };

    for (const auto& r : data.relations) {
        auto src = stereo_of(r.source);
        auto tgt = stereo_of(r.target);
        if (!src) fail(r.span, "unknown classifier '" + r.source + "' at source of '" + r.name + "'");
        if (!tgt) fail(r.span, "unknown classifier '" + r.target + "' at target of '" + r.name + "'");
        if (r.derivedFrom && r.kind != RelationKind::Material)
            fail(r.span, "derivedFrom is only allowed on material relations ('" + r.name + "')");
        if (r.derivedFrom && !classifiers.count(r.derivedFrom->relator))
            fail(r.span, "unknown classifier '" + r.derivedFrom->relator + "' in derivedFrom of '" + r.name + "'");
        if (r.kind == RelationKind::Comparative && !r.via)
            fail(r.span, "comparative relation '" + r.name + "' requires 'via'");
        if (r.kind != RelationKind::Comparative && r.via)
            fail(r.span, "'via' is only allowed on comparative relations ('" + r.name + "')");
        if (r.via && !classifiers.count(r.via->quality))
            fail(r.span, "unknown classifier '" + r.via->quality + "' in via of '" + r.name + "'");
        if (!src) continue;
        if (r.kind == RelationKind::Mediation && *src != Stereotype::Relator)
            fail(r.span, "mediation '" + r.name + "' must have a relator source");
        if (r.kind == RelationKind::Characterization && *src != Stereotype::Mode && *src != Stereotype::Quality)
            fail(r.span, "characterization '" + r.name + "' must have a mode or quality source");
        if (r.kind == RelationKind::Participation && *src != Stereotype::Event)
            fail(r.span, "participation '" + r.name + "' must have an event source");
    }

    std::set<std::string, std::less<>> gensetNames;
    for (const auto& g : data.generalizationSets) {
        if (!gensetNames.insert(g.name).second) fail(g.span, "duplicate generalization set '" + g.name + "'");
        if (!classifiers.count(g.general)) {
            fail(g.span, "unknown classifier '" + g.general + "' in genset '" + g.name + "'");
            continue;
        }
        if (g.specifics.size() < 2) fail(g.span, "genset '" + g.name + "' needs at least two specifics");
        std::set<std::string> seen;
        for (const auto& s : g.specifics) {
            if (!seen.insert(s).second) fail(g.span, "duplicate specific '" + s + "' in genset '" + g.name + "'");
            if (!classifiers.count(s)) {
                fail(g.span, "unknown classifier '" + s + "' in genset '" + g.name + "'");
                continue;
            }
            // the general must be reachable upward from the specific
            std::vector<std::string> stack{s};
            std::set<std::string> reached;
            bool found = false;
            while (!stack.empty() && !found) {
                auto cur = stack.back();
                stack.pop_back();
                auto it = classifiers.find(cur);
                if (it == classifiers.end()) continue;
                for (const auto& p : it->second->parents) {
                    if (p == g.general) found = true;
                    if (reached.insert(p).second) stack.push_back(p);
                }
            }
            if (!found)
                fail(g.span, "specific '" + s + "' of genset '" + g.name + "' does not specialize '" + g.general + "'");
        }
    }

    std::set<std::string, std::less<>> owners;
    for (const auto& sp : data.spaces) {
        auto st = stereo_of(sp.owner);
        if (!st) {
            fail(sp.span, "unknown quality '" + sp.owner + "' for space");
            continue;
        }
        if (*st != Stereotype::Quality) fail(sp.span, "space owner '" + sp.owner + "' is not a quality");
        if (!owners.insert(sp.owner).second) fail(sp.span, "duplicate space for '" + sp.owner + "'");
        if (sp.ordered()) {
            if (sp.lo > sp.hi) fail(sp.span, "ordered space for '" + sp.owner + "' has lo > hi");
        } else {
            if (sp.labels.empty()) fail(sp.span, "nominal space for '" + sp.owner + "' has no labels");
            std::set<std::string> labels(sp.labels.begin(), sp.labels.end());
            if (labels.size() != sp.labels.size())
                fail(sp.span, "nominal space for '" + sp.owner + "' has duplicate labels");
        }
    }
    return errors;
}

Model::Model(ModelData data) : data_(std::move(data)) {
    auto errors = validate_structure(data_);
    if (!errors.empty()) throw OntoError(ErrorCode::IllFormedModel, errors.front().message);

    for (auto& c : data_.classifiers) {
        std::sort(c.parents.begin(), c.parents.end());
        c.parents.erase(std::unique(c.parents.begin(), c.parents.end()), c.parents.end());
    }
    for (auto& g : data_.generalizationSets) std::sort(g.specifics.begin(), g.specifics.end());
    auto by_name = [](const auto& a, const auto& b) { return a.name < b.name; };
    std::sort(data_.classifiers.begin(), data_.classifiers.end(), by_name);
    std::sort(data_.relations.begin(), data_.relations.end(), by_name);
    std::sort(data_.generalizationSets.begin(), data_.generalizationSets.end(), by_name);
    std::sort(data_.spaces.begin(), data_.spaces.end(),
              [](const QualitySpace& a, const QualitySpace& b) { return a.owner < b.owner; });

    for (std::size_t i = 0; i < data_.classifiers.size(); ++i) classifierIndex_[data_.classifiers[i].name] = i;
    for (std::size_t i = 0; i < data_.relations.size(); ++i) relationIndex_[data_.relations[i].name] = i;

    std::function<const std::set<std::string>&(const Classifier&)> closure =
        [&](const Classifier& c) -> const std::set<std::string>& {
        auto it = ancestors_.find(c.name);
        if (it != ancestors_.end()) return it->second;
        std::set<std::string> acc;
        for (const auto& p : c.parents) {
            acc.insert(p);
            const auto& up = closure(data_.classifiers[classifierIndex_.at(p)]);
            acc.insert(up.begin(), up.end());
        }
        return ancestors_.emplace(c.name, std::move(acc)).first->second;
    };
    for (const auto& c : data_.classifiers) closure(c);
    for (const auto& c : data_.classifiers) {
        descendants_[c.name];
        for (const auto& a : ancestors_.at(c.name)) descendants_[a].insert(c.name);
    }
}

const Classifier* Model::find_classifier(std::string_view name) const {
    auto it = classifierIndex_.find(name);
    return it == classifierIndex_.end() ? nullptr : &data_.classifiers[it->second];
}

const RelationDecl* Model::find_relation(std::string_view name) const {
    auto it = relationIndex_.find(name);
    return it == relationIndex_.end() ? nullptr : &data_.relations[it->second];
}

const QualitySpace* Model::find_space(std::string_view quality) const {
    for (const auto& s : data_.spaces)
        if (s.owner == quality) return &s;
    return nullptr;
}

const Classifier& Model::classifier(std::string_view name) const {
    if (auto* c = find_classifier(name)) return *c;
    throw OntoError(ErrorCode::UnknownClassifier, "no classifier named '" + std::string(name) + "'");
}

const RelationDecl& Model::relation(std::string_view name) const {
    if (auto* r = find_relation(name)) return *r;
    throw OntoError(ErrorCode::UnknownRelation, "no relation named '" + std::string(name) + "'");
}

const std::set<std::string>& Model::ancestors(std::string_view name) const {
    auto it = ancestors_.find(name);
    return it == ancestors_.end() ? kEmptySet : it->second;
}

const std::set<std::string>& Model::descendants(std::string_view name) const {
    auto it = descendants_.find(name);
    return it == descendants_.end() ? kEmptySet : it->second;
}

bool Model::specializes(std::string_view a, std::string_view b) const {
    const auto& anc = ancestors(a);
    return anc.find(std::string(b)) != anc.end();
}

bool Model::comparable(std::string_view a, std::string_view b) const {
    return a == b || specializes(a, b) || specializes(b, a);
}

bool Model::operator==(const Model& other) const {
    return data_.name == other.data_.name && data_.span == other.data_.span &&
           data_.classifiers == other.data_.classifiers && data_.relations == other.data_.relations &&
           data_.generalizationSets == other.data_.generalizationSets && data_.spaces == other.data_.spaces;
}

std::vector<std::string> kind_ancestors(const Model& model, std::string_view classifier) {
    std::vector<std::string> kinds;
    const auto& c = model.classifier(classifier);
    if (c.stereotype == Stereotype::Kind) kinds.push_back(c.name);
    for (const auto& a : model.ancestors(classifier))
        if (model.classifier(a).stereotype == Stereotype::Kind) kinds.push_back(a);
    return kinds;
}

std::string ultimate_kind(const Model& model, std::string_view classifier) {
    const auto& c = model.classifier(classifier);
    if (!is_sortal(c.stereotype))
        throw OntoError(ErrorCode::NotSortal,
                        "'" + c.name + "' is a " + std::string(to_string(c.stereotype)) + ", not a sortal");
    if (c.stereotype == Stereotype::Kind) return c.name;
    auto kinds = kind_ancestors(model, classifier);
    if (kinds.empty()) throw OntoError(ErrorCode::NoKind, "'" + c.name + "' has no Kind ancestor");
    if (kinds.size() > 1)
        throw OntoError(ErrorCode::AmbiguousKind,
                        "'" + c.name + "' specializes several kinds: " + kinds[0] + ", " + kinds[1]);
    return kinds.front();
}

} // namespace ontokit
