#include "ontokit/interop.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ontokit/rules.hpp"

namespace ontokit {

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::IdentityCandidate: return "IdentityCandidate";
    case Verdict::SpecializationCandidate: return "SpecializationCandidate";
    case Verdict::SiblingSubtypesCandidate: return "SiblingSubtypesCandidate";
    case Verdict::ManifestationCandidate: return "ManifestationCandidate";
    case Verdict::HistoricalDependenceCandidate: return "HistoricalDependenceCandidate";
    case Verdict::IdentityExcluded: return "IdentityExcluded";
    }
    return "?";
}

namespace {

enum class Category { Endurant, Event, Relator, Aspect };

Category category(Stereotype s) {
    switch (s) {
    case Stereotype::Event: return Category::Event;
    case Stereotype::Relator: return Category::Relator;
    case Stereotype::Mode:
    case Stereotype::Quality: return Category::Aspect;
    default: return Category::Endurant;
    }
}

std::string_view category_name(Category c) {
    switch (c) {
    case Category::Endurant: return "endurant type";
    case Category::Event: return "event";
    case Category::Relator: return "relator";
    case Category::Aspect: return "mode/quality";
    }
    return "?";
}

bool present_role(Stereotype s) { return s == Stereotype::Role || s == Stereotype::RoleMixin; }
bool historical_role(Stereotype s) { return s == Stereotype::HistoricalRole || s == Stereotype::HistoricalRoleMixin; }

// Kinds of the sortals at or below a type; empty for dependent and aspect types.
std::set<std::string> kinds_of(const Model& model, const std::string& type) {
    std::set<std::string> out;
    std::vector<std::string> below{type};
    below.insert(below.end(), model.descendants(type).begin(), model.descendants(type).end());
    for (const auto& t : below) {
        if (!is_sortal(model.classifier(t).stereotype)) continue;
        auto ks = kind_ancestors(model, t);
        if (ks.size() == 1) out.insert(ks.front());
    }
    return out;
}

bool share_kind(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return true;
    return std::any_of(a.begin(), a.end(), [&](const std::string& k) { return b.count(k) > 0; });
}

std::string quote(const Classifier& c) {
    return std::string(to_string(c.stereotype)) + " '" + c.name + "'";
}

void classify(const Model& lm, const Classifier& l, const Model& rm, const Classifier& r, Correspondence& out) {
    const auto ls = l.stereotype;
    const auto rs = r.stereotype;
    const std::string pair = quote(l) + " vs " + quote(r);

    if ((ls == Stereotype::Relator && rs == Stereotype::Event) || (ls == Stereotype::Event && rs == Stereotype::Relator)) {
        out.verdict = Verdict::IdentityExcluded;
        out.alternatives = {Verdict::ManifestationCandidate};
        out.rationale = "relator-event rule: " + pair +
                        "; a relator is an endurant bundle of commitments and an event unfolds in time, so the event "
                        "may manifest the relator's commitments";
        return;
    }

    const auto lk = kinds_of(lm, l.name);
    const auto rk = kinds_of(rm, r.name);
    if ((present_role(ls) && historical_role(rs)) || (historical_role(ls) && present_role(rs))) {
        out.verdict = Verdict::IdentityExcluded;
        if (share_kind(lk, rk)) {
            out.alternatives = {Verdict::HistoricalDependenceCandidate};
            out.rationale = "role-historical-role rule: " + pair +
                            " over the same kind; the historical role is played in virtue of a past event, and may bear "
                            "historical dependence on the present role";
        } else {
            out.rationale = "role-historical-role rule: " + pair + " over different kinds";
        }
        return;
    }

    const auto lc = category(ls);
    const auto rc = category(rs);
    if (lc != rc) {
        out.verdict = Verdict::IdentityExcluded;
        out.rationale = "category rule: " + pair + " belong to different ontological categories (" +
                        std::string(category_name(lc)) + " vs " + std::string(category_name(rc)) +
                        "); existential, generic, notional or future dependence between them is left to the modeler";
        return;
    }

    if (ls == rs) {
        if (!share_kind(lk, rk)) {
            out.verdict = Verdict::IdentityExcluded;
            out.rationale = "identity rule: " + pair + " fall under different kinds and so different identity principles";
            return;
        }
        auto lsig = leibniz_signature(lm, l.name);
        auto rsig = leibniz_signature(rm, r.name);
        if (lsig == rsig) {
            out.verdict = Verdict::IdentityCandidate;
            out.alternatives = {Verdict::SpecializationCandidate, Verdict::SiblingSubtypesCandidate};
            out.rationale = "identity rule: " + pair + " share stereotype, kind and declared structure";
            return;
        }
        out.verdict = Verdict::SpecializationCandidate;
        out.alternatives = {Verdict::SiblingSubtypesCandidate};
        bool lsup = std::includes(lsig.begin(), lsig.end(), rsig.begin(), rsig.end());
        bool rsup = std::includes(rsig.begin(), rsig.end(), lsig.begin(), lsig.end());
        if (lsup) out.moreSpecific = "left";
        if (rsup) out.moreSpecific = "right";
        out.rationale = "identity rule with Leibniz check: " + pair +
                        " share stereotype and kind but differ in declared structure, so they cannot be identical";
        return;
    }

    if (rigidity(ls) != rigidity(rs)) {
        out.verdict = Verdict::IdentityExcluded;
        out.alternatives = {Verdict::SpecializationCandidate};
        out.moreSpecific = rigidity(ls) == Rigidity::AntiRigid ? "left" : "right";
        out.rationale = "rigidity rule: " + pair + " differ in rigidity; the anti-rigid type may specialize the rigid one";
        return;
    }
    out.verdict = Verdict::SpecializationCandidate;
    out.alternatives = {Verdict::SiblingSubtypesCandidate};
    out.rationale = "stereotype rule: " + pair +
                    " share category and rigidity but not stereotype; one may specialize the other or both may "
                    "specialize an implicit common supertype";
}

} // namespace

std::vector<std::string> leibniz_signature(const Model& model, std::string_view classifier) {
    std::set<std::string> self{std::string(classifier)};
    for (const auto& a : model.ancestors(classifier)) self.insert(a);
    std::set<std::string> sig;
    for (const auto& r : model.relations()) {
        std::string kind(to_string(r.kind));
        if (self.count(r.source)) sig.insert(kind + ":source:" + (self.count(r.target) ? "self" : r.target));
        if (self.count(r.target)) sig.insert(kind + ":target:" + (self.count(r.source) ? "self" : r.source));
    }
    return {sig.begin(), sig.end()};
}

std::vector<Correspondence> compare(const Model& left, const Model& right,
                                    const std::optional<std::vector<std::pair<std::string, std::string>>>& pairs) {
    for (const auto* m : {&left, &right})
        if (has_errors(check(*m)))
            throw OntoError(ErrorCode::IllFormedModel, "model '" + m->name() + "' has well-formedness errors");

    std::vector<std::pair<std::string, std::string>> todo;
    if (pairs) {
        for (const auto& [l, r] : *pairs) {
            left.classifier(l);
            right.classifier(r);
        }
        todo = *pairs;
    } else {
        for (const auto& c : left.classifiers())
            if (right.find_classifier(c.name)) todo.emplace_back(c.name, c.name);
    }

    std::vector<Correspondence> out;
    for (const auto& [l, r] : todo) {
        Correspondence c;
        c.leftModel = left.name();
        c.left = l;
        c.rightModel = right.name();
        c.right = r;
        classify(left, left.classifier(l), right, right.classifier(r), c);
        out.push_back(std::move(c));
    }
    return out;
}

std::string correspondences_to_json(const Model& left, const Model& right, const std::vector<Correspondence>& cs) {
    using nlohmann::json;
    json arr = json::array();
    for (const auto& c : cs) {
        json alts = json::array();
        for (auto v : c.alternatives) alts.push_back(std::string(to_string(v)));
        json j{{"left", json{{"model", c.leftModel},
                             {"classifier", c.left},
                             {"stereotype", std::string(to_string(left.classifier(c.left).stereotype))}}},
               {"right", json{{"model", c.rightModel},
                              {"classifier", c.right},
                              {"stereotype", std::string(to_string(right.classifier(c.right).stereotype))}}},
               {"verdict", std::string(to_string(c.verdict))},
               {"alternatives", alts},
               {"rationale", c.rationale}};
        if (!c.moreSpecific.empty()) j["moreSpecific"] = c.moreSpecific;
        arr.push_back(std::move(j));
    }
    return json{{"left", left.name()}, {"right", right.name()}, {"correspondences", arr}}.dump(2) + "\n";
}

std::string correspondences_to_text(const std::vector<Correspondence>& cs) {
    std::ostringstream out;
    for (const auto& c : cs) {
        out << c.leftModel << "::" << c.left << " ~ " << c.rightModel << "::" << c.right << ": " << to_string(c.verdict);
        for (auto v : c.alternatives) out << " +" << to_string(v);
        if (!c.moreSpecific.empty()) out << " (more specific: " << c.moreSpecific << ")";
        out << "\n  " << c.rationale << "\n";
    }
    return out.str();
}

} // namespace ontokit
