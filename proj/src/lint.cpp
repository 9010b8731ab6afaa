#include "ontokit/lint.hpp"

#include <algorithm>

#include "ontokit/rules.hpp"

namespace ontokit {

const std::vector<AntiPatternInfo>& antipattern_catalog() {
    static const std::vector<AntiPatternInfo> catalog = {
        {"AP1", "OverlappingRoleFillers",
         "one individual may fill two ends of the same relator or event instance"},
        {"AP2", "UngroundedComparative", "a comparative whose direction admits ties"},
    };
    return catalog;
}

namespace {

std::vector<std::string> sortals_below(const Model& model, std::string_view type) {
    std::vector<std::string> out;
    if (is_sortal(model.classifier(type).stereotype)) out.emplace_back(type);
    for (const auto& d : model.descendants(type))
        if (is_sortal(model.classifier(d).stereotype)) out.push_back(d);
    return out;
}

bool at_or_below(const Model& model, const std::string& x, const std::string& g) {
    return x == g || model.specializes(x, g);
}

bool separated(const Model& model, const std::string& s1, const std::string& s2) {
    for (const auto& g : model.generalizationSets()) {
        if (!g.isDisjoint) continue;
        for (const auto& a : g.specifics)
            for (const auto& b : g.specifics)
                if (a != b && at_or_below(model, s1, a) && at_or_below(model, s2, b)) return true;
    }
    return false;
}

} // namespace

bool extensions_may_overlap(const Model& model, std::string_view a, std::string_view b) {
    for (const auto& s1 : sortals_below(model, a)) {
        auto k1 = kind_ancestors(model, s1);
        if (k1.size() != 1) continue;
        for (const auto& s2 : sortals_below(model, b)) {
            if (kind_ancestors(model, s2) != k1) continue;
            if (!separated(model, s1, s2)) return true;
        }
    }
    return false;
}

namespace {

Diagnostic finding(std::string_view id, Severity severity, const SourceSpan& span, std::string message,
                   std::vector<std::string> related) {
    Diagnostic d;
    d.ruleId = std::string(id);
    d.severity = severity;
    d.span = span;
    d.message = std::move(message);
    d.related = std::move(related);
    return d;
}

void ap1_overlapping_fillers(const Model& model, const Scope& scope, const FinderOptions& options,
                             std::vector<Diagnostic>& out) {
    for (const auto& c : model.classifiers()) {
        if (c.stereotype != Stereotype::Relator && c.stereotype != Stereotype::Event) continue;
        std::vector<const RelationDecl*> ties;
        for (const auto& r : model.relations())
            if ((r.kind == RelationKind::Mediation || r.kind == RelationKind::Participation) && r.source == c.name)
                ties.push_back(&r);
        for (std::size_t i = 0; i < ties.size(); ++i) {
            for (std::size_t j = i + 1; j < ties.size(); ++j) {
                const auto& m1 = *ties[i];
                const auto& m2 = *ties[j];
                if (!extensions_may_overlap(model, m1.target, m2.target)) continue;
                Goal goal;
                goal.types = {{"r", c.name}, {"x", m1.target}, {"x", m2.target}};
                goal.links = {{m1.name, "r", "x"}, {m2.name, "r", "x"}};
                auto witness = find_witness(model, scope, goal, options);
                std::vector<std::string> related{c.name, m1.name, m2.name, m1.target, m2.target};
                std::string what = "one individual can be both '" + m1.target + "' and '" + m2.target +
                                   "' in the same '" + c.name + "' (" + m1.name + ", " + m2.name + ")";
                if (witness) {
                    auto d = finding("AP1", Severity::Warning, c.span, what, related);
                    d.witness = std::move(witness);
                    out.push_back(std::move(d));
                } else {
                    out.push_back(finding("AP1", Severity::Info, c.span,
                                          "structurally matched, no in-scope witness: " + what, related));
                }
            }
        }
    }
}

void ap2_ungrounded_comparatives(const Model& model, const Scope& scope, const FinderOptions& options,
                                 std::vector<Diagnostic>& out) {
    for (const auto& r : model.relations()) {
        if (r.kind != RelationKind::Comparative || !r.via || is_strict(r.via->direction)) continue;
        auto report = check_metaproperties(model, r.name, scope, options);
        std::vector<std::string> related{r.name, r.via->quality};
        const std::string what = "comparative '" + r.name + "' reads '" + r.via->quality + "' with non-strict direction " +
                                 std::string(to_string(r.via->direction));
        const auto& ce = report.asymmetricCounterexample ? report.asymmetricCounterexample
                                                         : report.irreflexiveCounterexample;
        if (ce) {
            std::string who;
            for (const auto& id : ce->individuals) who += (who.empty() ? "" : ", ") + id;
            auto d = finding("AP2", Severity::Warning, r.span,
                             what + "; ties make it " + (report.asymmetric ? "reflexive" : "symmetric") + " on " + who,
                             related);
            d.witness = ce->world;
            out.push_back(std::move(d));
        } else {
            out.push_back(finding("AP2", Severity::Info, r.span, "structurally matched, no in-scope witness: " + what,
                                  related));
        }
    }
}

} // namespace

std::vector<Diagnostic> lint(const Model& model, const Scope& scope, const FinderOptions& options) {
    if (has_errors(check(model)))
        throw OntoError(ErrorCode::IllFormedModel, "model '" + model.name() + "' has well-formedness errors");
    std::vector<Diagnostic> out;
    ap1_overlapping_fillers(model, scope, options, out);
    ap2_ungrounded_comparatives(model, scope, options, out);
    sort_diagnostics(out);
    return out;
}

} // namespace ontokit
