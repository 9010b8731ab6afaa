#include <doctest.h>

#include <algorithm>

#include "ontokit/interop.hpp"
#include "support.hpp"

using namespace ontokit;
using testing::fixture;
using testing::parse;

namespace {

Correspondence only(const std::vector<Correspondence>& cs) {
    REQUIRE(cs.size() == 1);
    return cs[0];
}

std::vector<Correspondence> pair(const Model& l, const Model& r, const std::string& a, const std::string& b) {
    return compare(l, r, std::vector<std::pair<std::string, std::string>>{{a, b}});
}

bool has(const std::vector<Verdict>& vs, Verdict v) { return std::find(vs.begin(), vs.end(), v) != vs.end(); }

const Stereotype kAll[] = {Stereotype::Kind, Stereotype::Subkind, Stereotype::Role, Stereotype::Phase,
                           Stereotype::Category, Stereotype::RoleMixin, Stereotype::Relator,
                           Stereotype::Event, Stereotype::Mode, Stereotype::Quality, Stereotype::HistoricalRole,
                           Stereotype::HistoricalRoleMixin};

// Declares X with stereotype s in a model that gives it whatever context it
// needs to pass the well-formedness rules.
Model host(Stereotype s) {
    std::string head = "model H" + std::string(to_string(s)) + "\nkind Person\nkind Org\nrelator Rel\nevent Ev\n"
                       "mediation r1 : Rel [1..*] -- [1..1] Person\nmediation r2 : Rel [1..*] -- [1..1] Org\n";
    switch (s) {
    case Stereotype::Kind: return parse(head + "kind X\n");
    case Stereotype::Subkind: return parse(head + "subkind X specializes Person\n");
    case Stereotype::Phase: return parse(head + "phase X specializes Person\n");
    case Stereotype::Role: return parse(head + "role X specializes Person\nmediation m : Rel [1..*] -- [1..1] X\n");
    case Stereotype::Category: return parse(head + "category X\nkind K specializes X\n");
    case Stereotype::RoleMixin:
        return parse(head + "roleMixin X\nrole P specializes Person, X\nmediation m : Rel [1..*] -- [1..1] X\n");
    case Stereotype::Relator: return parse(head + "relator X\nmediation m : X [1..*] -- [1..1] Person\nmediation n : X [1..*] -- [1..1] Org\n");
    case Stereotype::Event: return parse(head + "event X\n");
    case Stereotype::Mode: return parse(head + "mode X\ncharacterization c : X [0..*] -- [1..1] Person\n");
    case Stereotype::Quality:
        return parse(head + "quality X\nspace X ordered 0..3\ncharacterization c : X [1..1] -- [1..1] Person\n");
    case Stereotype::HistoricalRole:
        return parse(head + "historicalRole X specializes Person\nparticipation p : Ev [1..*] -- [1..1] X\n");
    case Stereotype::HistoricalRoleMixin:
        return parse(head + "historicalRoleMixin X\nhistoricalRole P specializes Person, X\n"
                            "participation p : Ev [1..*] -- [1..1] X\n");
    }
    return parse(head);
}

} // namespace

TEST_CASE("treatment as relator and as event") {
    auto rel = fixture("healthcare_relator.onto");
    auto ev = fixture("healthcare_event.onto");
    const auto& c = only(pair(rel, ev, "Treatment", "Treatment"));
    CHECK(c.verdict == Verdict::IdentityExcluded);
    CHECK(c.alternatives == std::vector<Verdict>{Verdict::ManifestationCandidate});
    CHECK(c.leftModel == "HealthcareRelator");
    CHECK(c.rightModel == "HealthcareEvent");
    CHECK_FALSE(c.rationale.empty());
}

TEST_CASE("patient as role and as historical role") {
    auto rel = fixture("healthcare_relator.onto");
    auto ev = fixture("healthcare_event.onto");
    const auto& c = only(pair(rel, ev, "Patient", "Patient"));
    CHECK(c.verdict == Verdict::IdentityExcluded);
    CHECK(c.alternatives == std::vector<Verdict>{Verdict::HistoricalDependenceCandidate});
}

TEST_CASE("default pairing covers name-equal types in order") {
    auto rel = fixture("healthcare_relator.onto");
    auto ev = fixture("healthcare_event.onto");
    auto cs = compare(rel, ev);
    std::vector<std::string> names;
    for (const auto& c : cs) names.push_back(c.left);
    CHECK(names == std::vector<std::string>{"HealthcareProvider", "Organization", "Patient", "Person", "Treatment"});
    auto person = std::find_if(cs.begin(), cs.end(), [](const Correspondence& c) { return c.left == "Person"; });
    CHECK(person->verdict != Verdict::IdentityExcluded);
}

TEST_CASE("a model compared with itself yields only identity candidates") {
    for (auto name : {"healthcare_relator.onto", "healthcare_event.onto", "severity.onto"}) {
        CAPTURE(name);
        auto m = fixture(name);
        auto cs = compare(m, m);
        CHECK(cs.size() == m.classifiers().size());
        for (const auto& c : cs) CHECK(c.verdict == Verdict::IdentityCandidate);
    }
}

TEST_CASE("every stereotype pair gets exactly one verdict, symmetrically") {
    for (auto a : kAll) {
        auto left = host(a);
        for (auto b : kAll) {
            CAPTURE(to_string(a));
            CAPTURE(to_string(b));
            auto right = host(b);
            const auto& ab = only(pair(left, right, "X", "X"));
            const auto& ba = only(pair(right, left, "X", "X"));
            CHECK(ab.verdict == ba.verdict);
            CHECK(ab.alternatives == ba.alternatives);
            CHECK_FALSE(has(ab.alternatives, ab.verdict));
            if (!ab.moreSpecific.empty())
                CHECK(ab.moreSpecific != ba.moreSpecific);
            if (a == b) CHECK(ab.verdict != Verdict::IdentityExcluded);
            bool dependentA = a == Stereotype::Relator || a == Stereotype::Event;
            bool dependentB = b == Stereotype::Relator || b == Stereotype::Event;
            if (dependentA != dependentB) CHECK(ab.verdict == Verdict::IdentityExcluded);
        }
    }
}

TEST_CASE("rigidity mismatch suggests specialization") {
    auto l = parse("model L\nkind Person\n");
    auto r = parse("model R\nkind Human\nphase Person specializes Human\n");
    const auto& c = only(compare(l, r));
    CHECK(c.verdict == Verdict::IdentityExcluded);
    CHECK(c.alternatives == std::vector<Verdict>{Verdict::SpecializationCandidate});
    CHECK(c.moreSpecific == "right");
}

TEST_CASE("signature and errors") {
    auto m = fixture("healthcare_relator.onto");
    auto sig = leibniz_signature(m, "Patient");
    CHECK(std::is_sorted(sig.begin(), sig.end()));
    CHECK_FALSE(sig.empty());
    auto ev = fixture("healthcare_event.onto");
    CHECK_THROWS_AS(pair(m, ev, "Ghost", "Patient"), OntoError);
    CHECK_THROWS_AS(compare(fixture("healthcare_plain.onto"), ev), OntoError);
    auto cs = compare(m, ev);
    CHECK(correspondences_to_json(m, ev, cs) == correspondences_to_json(m, ev, compare(m, ev)));
    CHECK(correspondences_to_json(m, ev, cs).find("\"verdict\"") != std::string::npos);
}
