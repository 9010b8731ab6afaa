#include "ontokit/rules.hpp"

#include <algorithm>
#include <map>

namespace ontokit {

const std::vector<RuleInfo>& rule_catalog() {
    static const std::vector<RuleInfo> catalog = {
        {"R1", Severity::Error, "every subkind, phase, role and historical role has exactly one ultimate kind"},
        {"R2", Severity::Error, "a kind specializes no sortal"},
        {"R3", Severity::Error, "a rigid classifier never specializes an anti-rigid one"},
        {"R4", Severity::Error, "every role-like classifier is (or inherits being) the target of a mediation or participation"},
        {"R5", Severity::Error, "a relator's mediated-side lower bounds sum to at least 2"},
        {"R6", Severity::Error, "every material relation is derived from exactly one relator"},
        {"R7", Severity::Error, "the derivation relator mediates types compatible with both material ends"},
        {"R8", Severity::Warning, "phases of the same kind are grouped in a disjoint, complete generalization set"},
        {"R9", Severity::Error, "a comparative is grounded in an ordered quality reaching both ends"},
        {"R10", Severity::Error, "every historical role is tied to a participation in an event"},
    };
    return catalog;
}

namespace {

bool relational_target(const Model& model, const RelationDecl& r) {
    if (r.kind != RelationKind::Mediation && r.kind != RelationKind::Participation) return false;
    return is_relational_role(model.classifier(r.target).stereotype);
}

// Relations of the given kinds whose target is `c` or one of its role-like ancestors.
bool has_dependence(const Model& model, const Classifier& c, bool participationOnly) {
    for (const auto& r : model.relations()) {
        if (!relational_target(model, r)) continue;
        if (participationOnly && r.kind != RelationKind::Participation) continue;
        if (r.target == c.name || model.specializes(c.name, r.target)) return true;
    }
    return false;
}

bool compatible(const Model& model, std::string_view t, std::string_view e) {
    if (model.comparable(t, e)) return true;
    const auto& tc = model.classifier(t);
    const auto& ec = model.classifier(e);
    if (!is_sortal(tc.stereotype) || !is_sortal(ec.stereotype)) return false;
    auto kt = kind_ancestors(model, t);
    auto ke = kind_ancestors(model, e);
    return kt.size() == 1 && ke == kt;
}

Diagnostic make(std::string_view id, const SourceSpan& span, std::string message, std::vector<std::string> related) {
    Diagnostic d;
    d.ruleId = std::string(id);
    for (const auto& info : rule_catalog())
        if (info.id == id) d.severity = info.severity;
    d.span = span;
    d.message = std::move(message);
    d.related = std::move(related);
    return d;
}

void r1_unique_kind(const Model& model, std::vector<Diagnostic>& out) {
    for (const auto& c : model.classifiers()) {
        if (!is_sortal(c.stereotype) || c.stereotype == Stereotype::Kind) continue;
        auto kinds = kind_ancestors(model, c.name);
        if (kinds.empty())
            out.push_back(make("R1", c.span, "'" + c.name + "' specializes no kind", {c.name}));
        else if (kinds.size() > 1) {
            std::vector<std::string> related{c.name};
            related.insert(related.end(), kinds.begin(), kinds.end());
            out.push_back(make("R1", c.span, "'" + c.name + "' specializes more than one kind", related));
        }
    }
}

void r2_kind_parents(const Model& model, std::vector<Diagnostic>& out) {
    for (const auto& c : model.classifiers()) {
        if (c.stereotype != Stereotype::Kind) continue;
        for (const auto& p : c.parents) {
            if (is_sortal(model.classifier(p).stereotype))
                out.push_back(make("R2", c.span, "kind '" + c.name + "' specializes sortal '" + p + "'", {c.name, p}));
        }
    }
}

void r3_rigidity(const Model& model, std::vector<Diagnostic>& out) {
    for (const auto& c : model.classifiers()) {
        if (rigidity(c) != Rigidity::Rigid) continue;
        for (const auto& p : c.parents) {
            if (rigidity(model.classifier(p)) == Rigidity::AntiRigid)
                out.push_back(make("R3", c.span,
                                   "rigid '" + c.name + "' specializes anti-rigid '" + p + "'", {c.name, p}));
        }
    }
}

void r4_relational_dependence(const Model& model, std::vector<Diagnostic>& out) {
    for (const auto& c : model.classifiers()) {
        if (!is_relational_role(c.stereotype)) continue;
        if (!has_dependence(model, c, false))
            out.push_back(make("R4", c.span,
                               std::string(to_string(c.stereotype)) + " '" + c.name +
                                   "' is not the target of any mediation or participation",
                               {c.name}));
    }
}

void r5_relator_arity(const Model& model, std::vector<Diagnostic>& out) {
    for (const auto& c : model.classifiers()) {
        if (c.stereotype != Stereotype::Relator) continue;
        std::int64_t sum = 0;
        std::vector<std::string> related{c.name};
        for (const auto& r : model.relations()) {
            if (r.kind == RelationKind::Mediation && r.source == c.name) {
                sum += r.targetMult.min;
                related.push_back(r.name);
            }
        }
        if (sum < 2)
            out.push_back(make("R5", c.span,
                               "relator '" + c.name + "' mediates at least " + std::to_string(sum) +
                                   " individual(s); a relator depends on two or more",
                               related));
    }
}

void r6_r7_material(const Model& model, std::vector<Diagnostic>& out) {
    for (const auto& r : model.relations()) {
        if (r.kind != RelationKind::Material) continue;
        if (!r.derivedFrom) {
            out.push_back(make("R6", r.span, "material relation '" + r.name + "' has no derivedFrom relator", {r.name}));
            continue;
        }
        const auto& rel = model.classifier(r.derivedFrom->relator);
        if (rel.stereotype != Stereotype::Relator) {
            out.push_back(make("R6", r.span,
                               "material relation '" + r.name + "' is derived from '" + rel.name +
                                   "', which is not a relator",
                               {r.name, rel.name}));
            continue;
        }
        if (!derivation_mediations(model, r))
            out.push_back(make("R7", r.span,
                               "relator '" + rel.name + "' has no mediations compatible with both ends of '" + r.name +
                                   "' (" + r.source + ", " + r.target + ")",
                               {r.name, rel.name, r.source, r.target}));
    }
}

void r8_phase_partitions(const Model& model, std::vector<Diagnostic>& out) {
    std::map<std::string, std::vector<const Classifier*>> phasesByKind;
    for (const auto& c : model.classifiers()) {
        if (c.stereotype != Stereotype::Phase) continue;
        auto kinds = kind_ancestors(model, c.name);
        if (kinds.size() == 1) phasesByKind[kinds.front()].push_back(&c);
    }
    for (const auto& [kind, phases] : phasesByKind) {
        if (phases.size() < 2) continue;
        std::vector<const Classifier*> loose;
        for (const auto* p : phases) {
            bool grouped = std::any_of(model.generalizationSets().begin(), model.generalizationSets().end(),
                                       [&](const GeneralizationSet& g) {
                                           return g.isDisjoint && g.isComplete &&
                                                  std::find(g.specifics.begin(), g.specifics.end(), p->name) !=
                                                      g.specifics.end();
                                       });
            if (!grouped) loose.push_back(p);
        }
        if (loose.empty()) continue;
        std::vector<std::string> related{kind};
        std::string names;
        for (const auto* p : loose) {
            related.push_back(p->name);
            names += (names.empty() ? "" : ", ") + p->name;
        }
        out.push_back(make("R8", loose.front()->span,
                           "phases of '" + kind + "' not partitioned by a disjoint, complete genset: " + names, related));
    }
}

void r9_comparatives(const Model& model, std::vector<Diagnostic>& out) {
    for (const auto& r : model.relations()) {
        if (r.kind != RelationKind::Comparative || !r.via) continue;
        const auto& q = model.classifier(r.via->quality);
        std::string problem;
        if (q.stereotype != Stereotype::Quality) {
            problem = "'" + q.name + "' is not a quality";
        } else if (const auto* sp = model.find_space(q.name); !sp) {
            problem = "quality '" + q.name + "' has no quality space";
        } else if (!sp->ordered()) {
            problem = "quality space of '" + q.name + "' is not ordered";
        } else {
            for (const auto& end : {r.source, r.target}) {
                if (!quality_reaches(model, q.name, end)) {
                    problem = "quality '" + q.name + "' does not characterize '" + end + "'";
                    break;
                }
            }
        }
        if (!problem.empty())
            out.push_back(make("R9", r.span, "comparative '" + r.name + "' is not grounded: " + problem,
                               {r.name, q.name}));
    }
}

void r10_historical_roles(const Model& model, std::vector<Diagnostic>& out) {
    for (const auto& c : model.classifiers()) {
        if (c.stereotype != Stereotype::HistoricalRole) continue;
        if (!has_dependence(model, c, true))
            out.push_back(make("R10", c.span,
                               "historical role '" + c.name + "' is not tied to a participation in an event", {c.name}));
    }
}

} // namespace

std::optional<std::pair<std::string, std::string>> derivation_mediations(const Model& model,
                                                                         const RelationDecl& material) {
    if (!material.derivedFrom) return std::nullopt;
    std::vector<const RelationDecl*> meds;
    for (const auto& r : model.relations())
        if (r.kind == RelationKind::Mediation && r.source == material.derivedFrom->relator) meds.push_back(&r);

    // Prefer distinct mediations and exact end matches; ties broken by name.
    std::optional<std::tuple<int, std::string, std::string>> best;
    for (const auto* a : meds) {
        if (!model.comparable(a->target, material.source)) continue;
        for (const auto* b : meds) {
            if (!model.comparable(b->target, material.target)) continue;
            int score = (a == b ? 4 : 0) + (a->target == material.source ? 0 : 1) + (b->target == material.target ? 0 : 1);
            std::tuple<int, std::string, std::string> cand{score, a->name, b->name};
            if (!best || cand < *best) best = cand;
        }
    }
    if (!best) return std::nullopt;
    return std::make_pair(std::get<1>(*best), std::get<2>(*best));
}

bool quality_reaches(const Model& model, std::string_view quality, std::string_view endType) {
    for (const auto& r : model.relations()) {
        if (r.kind != RelationKind::Characterization || r.source != quality) continue;
        if (compatible(model, r.target, endType)) return true;
        if (model.classifier(r.target).stereotype != Stereotype::Mode) continue;
        for (const auto& m : model.relations()) {
            if (m.kind == RelationKind::Characterization && m.source == r.target && compatible(model, m.target, endType))
                return true;
        }
    }
    return false;
}

std::vector<Diagnostic> check(const Model& model) {
    std::vector<Diagnostic> out;
    r1_unique_kind(model, out);
    r2_kind_parents(model, out);
    r3_rigidity(model, out);
    r4_relational_dependence(model, out);
    r5_relator_arity(model, out);
    r6_r7_material(model, out);
    r8_phase_partitions(model, out);
    r9_comparatives(model, out);
    r10_historical_roles(model, out);
    sort_diagnostics(out);
    return out;
}

} // namespace ontokit
