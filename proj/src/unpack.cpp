#include "ontokit/unpack.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "json_io.hpp"
#include "ontokit/rules.hpp"

namespace ontokit {

namespace {

constexpr Multiplicity kOneOrMore{1, Multiplicity::kUnbounded};
constexpr Multiplicity kExactlyOne{1, 1};

bool declared(const Model& model, std::string_view name) {
    return model.find_classifier(name) || model.find_relation(name) ||
           std::any_of(model.generalizationSets().begin(), model.generalizationSets().end(),
                       [&](const GeneralizationSet& g) { return g.name == name; });
}

void claim(const Model& model, std::set<std::string>& taken, const std::string& name) {
    if (declared(model, name) || !taken.insert(name).second)
        throw OntoError(ErrorCode::NameClash, "'" + name + "' is already declared");
}

std::int64_t times(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a == Multiplicity::kUnbounded || b == Multiplicity::kUnbounded) return Multiplicity::kUnbounded;
    return a * b;
}

std::int64_t smaller(std::int64_t a, std::int64_t b) {
    if (a == Multiplicity::kUnbounded) return b;
    if (b == Multiplicity::kUnbounded) return a;
    return std::min(a, b);
}

std::optional<Multiplicity> intersect(const Multiplicity& a, const Multiplicity& b) {
    Multiplicity m{std::max(a.min, b.min), smaller(a.max, b.max)};
    if (!m.unbounded() && m.max < m.min) return std::nullopt;
    return m;
}

MaterialCardinalities derive(const RelationDecl& a, const RelationDecl& b) {
    // a: relator [nA..NA] -- [mA..MA] A
    MaterialCardinalities c;
    c.mediationA = a.name;
    c.mediationB = b.name;
    c.typeA = a.target;
    c.typeB = b.target;
    c.endB = {a.sourceMult.min >= 1 ? b.targetMult.min : 0, times(a.sourceMult.max, b.targetMult.max)};
    c.endA = {b.sourceMult.min >= 1 ? a.targetMult.min : 0, times(b.sourceMult.max, a.targetMult.max)};
    c.perTuple = {1, smaller(a.sourceMult.max, b.sourceMult.max)};
    return c;
}

std::vector<const RelationDecl*> mediations_of(const Model& model, std::string_view relator) {
    const auto& c = model.classifier(relator);
    if (c.stereotype != Stereotype::Relator)
        throw OntoError(ErrorCode::NotBinaryRelator, "'" + c.name + "' is not a relator");
    std::vector<const RelationDecl*> meds;
    for (const auto& r : model.relations())
        if (r.kind == RelationKind::Mediation && r.source == relator) meds.push_back(&r);
    if (meds.size() != 2)
        throw OntoError(ErrorCode::NotBinaryRelator,
                        "'" + c.name + "' has " + std::to_string(meds.size()) + " mediations, expected 2");
    return meds;
}

// Role-like ends are reused as they are; categories get a role mixin.
std::optional<Stereotype> role_for(const Classifier& end) {
    if (is_relational_role(end.stereotype)) return std::nullopt;
    return end.stereotype == Stereotype::Category ? Stereotype::RoleMixin : Stereotype::Role;
}

std::string bearer_for(const Model& model, const RelationDecl& r) {
    if (model.comparable(r.source, r.target)) return model.specializes(r.source, r.target) ? r.target : r.source;
    auto ks = kind_ancestors(model, r.source);
    auto kt = kind_ancestors(model, r.target);
    if (ks.size() == 1 && ks == kt) return ks.front();
    throw OntoError(ErrorCode::NoSharedBearer,
                    "'" + r.source + "' and '" + r.target + "' share no kind to bear a quality");
}

} // namespace

UnpackPlan unpack_material(const Model& model, std::string_view relation, std::string_view relatorName,
                           const std::pair<std::string, std::string>& roleNames) {
    const auto* found = model.find_relation(relation);
    if (!found || found->kind != RelationKind::Material)
        throw OntoError(ErrorCode::NotMaterial, "'" + std::string(relation) + "' is not a material relation");
    const auto& mat = *found;
    if (mat.derivedFrom)
        throw OntoError(ErrorCode::AlreadyDerived,
                        "'" + mat.name + "' is already derived from '" + mat.derivedFrom->relator + "'");

    UnpackPlan plan;
    plan.targetRelation = mat.name;
    std::set<std::string> taken;
    claim(model, taken, std::string(relatorName));
    plan.newClassifiers.push_back({std::string(relatorName), Stereotype::Relator, {}, false, mat.span});

    auto role_end = [&](const std::string& endType, const std::string& roleName) {
        const auto& end = model.classifier(endType);
        auto stereo = role_for(end);
        if (!stereo) return endType;
        claim(model, taken, roleName);
        plan.newClassifiers.push_back({roleName, *stereo, {endType}, false, mat.span});
        return roleName;
    };
    const std::string roleA = role_end(mat.source, roleNames.first);
    const std::string roleB = role_end(mat.target, roleNames.second);

    std::vector<std::string> mediated{roleA};
    if (roleB != roleA) mediated.push_back(roleB);
    for (const auto& role : mediated) {
        RelationDecl m;
        m.name = "mediates" + role;
        claim(model, taken, m.name);
        m.kind = RelationKind::Mediation;
        m.source = std::string(relatorName);
        m.target = role;
        m.sourceMult = kOneOrMore;
        // A relator mediating one role from both ends mediates two of them.
        m.targetMult = mediated.size() == 1 ? Multiplicity{2, 2} : kExactlyOne;
        m.span = mat.span;
        plan.newRelations.push_back(std::move(m));
    }

    RelationDecl derived = mat;
    derived.source = roleA;
    derived.target = roleB;
    derived.derivedFrom = Derivation{std::string(relatorName), kOneOrMore};
    plan.newRelations.push_back(std::move(derived));
    plan.replaces.push_back(mat.name);
    return plan;
}

UnpackPlan unpack_comparative(const Model& model, std::string_view relation, std::string_view qualityName,
                              const QualitySpace& space, Direction direction) {
    const auto* found = model.find_relation(relation);
    bool eligible = found && (found->kind == RelationKind::Comparative ||
                              (found->kind == RelationKind::Material && !found->derivedFrom));
    if (!eligible)
        throw OntoError(ErrorCode::NotComparative,
                        "'" + std::string(relation) + "' is neither comparative nor an underived material relation");
    if (!space.ordered())
        throw OntoError(ErrorCode::UnorderedSpace, "a comparative needs an ordered quality space");
    const auto& rel = *found;
    const std::string quality(qualityName);

    UnpackPlan plan;
    plan.targetRelation = rel.name;
    std::set<std::string> taken;

    if (const auto* existing = model.find_classifier(quality)) {
        if (existing->stereotype != Stereotype::Quality)
            throw OntoError(ErrorCode::NameClash, "'" + quality + "' is declared as a " +
                                                      std::string(to_string(existing->stereotype)));
        if (const auto* sp = model.find_space(quality); sp && !sp->ordered())
            throw OntoError(ErrorCode::UnorderedSpace, "quality '" + quality + "' has a nominal space");
        else if (!sp) {
            QualitySpace s = space;
            s.owner = quality;
            s.span = rel.span;
            plan.newSpaces.push_back(std::move(s));
        }
    } else {
        claim(model, taken, quality);
        plan.newClassifiers.push_back({quality, Stereotype::Quality, {}, false, rel.span});
        QualitySpace s = space;
        s.owner = quality;
        s.span = rel.span;
        plan.newSpaces.push_back(std::move(s));
    }

    bool grounded = model.find_classifier(quality) && quality_reaches(model, quality, rel.source) &&
                    quality_reaches(model, quality, rel.target);
    if (!grounded) {
        RelationDecl ch;
        ch.name = "has" + quality;
        if (model.find_relation(ch.name)) ch.name += bearer_for(model, rel);
        claim(model, taken, ch.name);
        ch.kind = RelationKind::Characterization;
        ch.source = quality;
        ch.target = bearer_for(model, rel);
        ch.sourceMult = kExactlyOne;
        ch.targetMult = kExactlyOne;
        ch.span = rel.span;
        plan.newRelations.push_back(std::move(ch));
    }

    RelationDecl grounded_rel = rel;
    grounded_rel.kind = RelationKind::Comparative;
    grounded_rel.sourceMult = {};
    grounded_rel.targetMult = {};
    grounded_rel.via = QualityRef{quality, direction};
    plan.newRelations.push_back(std::move(grounded_rel));
    plan.replaces.push_back(rel.name);
    return plan;
}

Model apply_plan(const Model& model, const UnpackPlan& plan) {
    ModelData data = model.data();
    std::erase_if(data.relations, [&](const RelationDecl& r) {
        return std::find(plan.replaces.begin(), plan.replaces.end(), r.name) != plan.replaces.end();
    });
    data.classifiers.insert(data.classifiers.end(), plan.newClassifiers.begin(), plan.newClassifiers.end());
    data.relations.insert(data.relations.end(), plan.newRelations.begin(), plan.newRelations.end());
    data.spaces.insert(data.spaces.end(), plan.newSpaces.begin(), plan.newSpaces.end());
    return Model(std::move(data));
}

MaterialCardinalities derive_material_cardinalities(const Model& model, std::string_view relator) {
    auto meds = mediations_of(model, relator);
    const RelationDecl* a = meds[0];
    const RelationDecl* b = meds[1];
    for (const auto& r : model.relations()) {
        if (r.kind != RelationKind::Material || !r.derivedFrom || r.derivedFrom->relator != relator) continue;
        auto pair = derivation_mediations(model, r);
        if (pair && pair->first != pair->second) {
            a = &model.relation(pair->first);
            b = &model.relation(pair->second);
        }
        break;
    }
    return derive(*a, *b);
}

Model tighten_material(const Model& model, std::string_view relation) {
    const auto& mat = model.relation(relation);
    if (mat.kind != RelationKind::Material)
        throw OntoError(ErrorCode::NotMaterial, "'" + mat.name + "' is not a material relation");
    if (!mat.derivedFrom)
        throw OntoError(ErrorCode::NotMaterial, "'" + mat.name + "' is not derived from a relator");
    mediations_of(model, mat.derivedFrom->relator);
    auto pair = derivation_mediations(model, mat);
    if (!pair || pair->first == pair->second)
        throw OntoError(ErrorCode::NotBinaryRelator,
                        "'" + mat.derivedFrom->relator + "' does not ground the ends of '" + mat.name + "' separately");
    auto c = derive(model.relation(pair->first), model.relation(pair->second));

    ModelData data = model.data();
    for (auto& r : data.relations) {
        if (r.name != mat.name) continue;
        if (auto m = intersect(r.targetMult, c.endB)) r.targetMult = *m;
        if (auto m = intersect(r.sourceMult, c.endA)) r.sourceMult = *m;
        if (auto m = intersect(r.derivedFrom->mult, c.perTuple)) r.derivedFrom->mult = *m;
    }
    return Model(std::move(data));
}

std::string plan_to_json(const UnpackPlan& plan) {
    using nlohmann::json;
    json cls = json::array();
    for (const auto& c : plan.newClassifiers) cls.push_back(detail::classifier_json(c));
    json rels = json::array();
    for (const auto& r : plan.newRelations) rels.push_back(detail::relation_json(r));
    json spaces = json::array();
    for (const auto& s : plan.newSpaces) spaces.push_back(detail::space_json(s));
    json j{{"targetRelation", plan.targetRelation},
           {"newClassifiers", cls},
           {"newRelations", rels},
           {"newSpaces", spaces},
           {"replaces", plan.replaces}};
    return j.dump(2) + "\n";
}

std::string cardinalities_to_json(std::string_view relator, const MaterialCardinalities& c) {
    nlohmann::json j{{"relator", std::string(relator)},
                     {"mediationA", c.mediationA},
                     {"mediationB", c.mediationB},
                     {"typeA", c.typeA},
                     {"typeB", c.typeB},
                     {"endA", c.endA.str()},
                     {"endB", c.endB.str()},
                     {"perTuple", c.perTuple.str()}};
    return j.dump(2) + "\n";
}

} // namespace ontokit
