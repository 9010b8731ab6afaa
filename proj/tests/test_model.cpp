#include <doctest.h>

#include <algorithm>

#include <random>

#include "ontokit/model.hpp"
#include "support.hpp"

using namespace ontokit;
using testing::fixture;
using testing::parse;

TEST_CASE("rigidity is a total function of the stereotype") {
    const std::vector<std::pair<Stereotype, Rigidity>> table = {
        {Stereotype::Kind, Rigidity::Rigid},           {Stereotype::Subkind, Rigidity::Rigid},
        {Stereotype::Category, Rigidity::Rigid},       {Stereotype::Relator, Rigidity::Rigid},
        {Stereotype::Mode, Rigidity::Rigid},           {Stereotype::Quality, Rigidity::Rigid},
        {Stereotype::Event, Rigidity::Rigid},          {Stereotype::Phase, Rigidity::AntiRigid},
        {Stereotype::Role, Rigidity::AntiRigid},       {Stereotype::RoleMixin, Rigidity::AntiRigid},
        {Stereotype::HistoricalRole, Rigidity::AntiRigid}, {Stereotype::HistoricalRoleMixin, Rigidity::AntiRigid},
    };
    CHECK(table.size() == 12);
    for (auto [s, r] : table) {
        CAPTURE(to_string(s));
        CHECK(rigidity(s) == r);
        CHECK(parse_stereotype(to_string(s)) == s);
    }
}

TEST_CASE("sortality classes") {
    for (auto s : {Stereotype::Kind, Stereotype::Subkind, Stereotype::Phase, Stereotype::Role, Stereotype::HistoricalRole})
        CHECK(is_sortal(s));
    for (auto s : {Stereotype::Category, Stereotype::RoleMixin, Stereotype::HistoricalRoleMixin}) {
        CHECK(is_non_sortal(s));
        CHECK_FALSE(is_sortal(s));
    }
    CHECK_FALSE(is_sortal(Stereotype::Relator));
    CHECK_FALSE(is_non_sortal(Stereotype::Relator));
}

TEST_CASE("multiplicity text form") {
    CHECK(Multiplicity{1, Multiplicity::kUnbounded}.str() == "1..*");
    CHECK(Multiplicity{0, 3}.str() == "0..3");
    CHECK(Multiplicity::parse("2..*") == Multiplicity{2, Multiplicity::kUnbounded});
    CHECK(Multiplicity::parse("1..1") == Multiplicity{1, 1});
    CHECK_FALSE(Multiplicity::parse("3..1"));
    CHECK_FALSE(Multiplicity::parse("*..1"));
    CHECK_FALSE(Multiplicity::parse("1.."));
    CHECK(Multiplicity{1, 2}.admits(2));
    CHECK_FALSE(Multiplicity{1, 2}.admits(3));
    CHECK(Multiplicity{1, Multiplicity::kUnbounded}.admits(1000));
}

TEST_CASE("ultimate_kind") {
    auto m = fixture("healthcare_relator.onto");
    CHECK(ultimate_kind(m, "Patient") == "Person");
    CHECK(ultimate_kind(m, "Person") == "Person");
    CHECK(ultimate_kind(m, "HealthcareProvider") == "Organization");

    SUBCASE("ambiguous") {
        auto amb = parse("model M\nkind A\nkind B\nrole X specializes A, B\n");
        CHECK_THROWS_WITH_AS(ultimate_kind(amb, "X"), doctest::Contains("AmbiguousKind"), OntoError);
    }
    SUBCASE("no kind") {
        auto none = parse("model M\ncategory C\nsubkind S specializes C\n");
        try {
            ultimate_kind(none, "S");
            FAIL("expected NoKind");
        } catch (const OntoError& e) {
            CHECK(e.code() == ErrorCode::NoKind);
        }
    }
    SUBCASE("non-sortals have no ultimate kind") {
        auto ev = fixture("healthcare_event.onto");
        try {
            ultimate_kind(ev, "HealthcareProvider");
            FAIL("expected NotSortal");
        } catch (const OntoError& e) {
            CHECK(e.code() == ErrorCode::NotSortal);
        }
    }
    SUBCASE("unknown classifier") {
        try {
            ultimate_kind(m, "Nobody");
            FAIL("expected UnknownClassifier");
        } catch (const OntoError& e) {
            CHECK(e.code() == ErrorCode::UnknownClassifier);
        }
    }
}

TEST_CASE("ultimate_kind is idempotent on every sortal of every fixture") {
    for (auto name : {"healthcare_relator.onto", "healthcare_event.onto", "healthcare_plain.onto", "severity.onto"}) {
        auto m = fixture(name);
        for (const auto& c : m.classifiers()) {
            if (!is_sortal(c.stereotype)) continue;
            auto k = ultimate_kind(m, c.name);
            CHECK(ultimate_kind(m, k) == k);
        }
    }
}

namespace {

// Random acyclic taxonomy: each classifier may specialize earlier ones.
std::string random_taxonomy(std::mt19937& rng, int n) {
    static const char* stereos[] = {"kind", "subkind", "phase", "role", "category", "roleMixin"};
    std::string text = "model R\n";
    for (int i = 0; i < n; ++i) {
        text += std::string(stereos[rng() % 6]) + " C" + std::to_string(i);
        std::vector<int> parents;
        for (int j = 0; j < i; ++j)
            if (rng() % 4 == 0) parents.push_back(j);
        for (std::size_t k = 0; k < parents.size(); ++k)
            text += (k ? ", C" : " specializes C") + std::to_string(parents[k]);
        text += "\n";
    }
    return text;
}

} // namespace

TEST_CASE("specialization closure is a strict partial order") {
    std::mt19937 rng(7);
    for (int round = 0; round < 40; ++round) {
        auto m = parse(random_taxonomy(rng, 8));
        for (const auto& a : m.classifiers()) {
            CHECK_FALSE(m.specializes(a.name, a.name));
            for (const auto& b : m.classifiers()) {
                if (m.specializes(a.name, b.name)) CHECK_FALSE(m.specializes(b.name, a.name));
                for (const auto& c : m.classifiers())
                    if (m.specializes(a.name, b.name) && m.specializes(b.name, c.name)) CHECK(m.specializes(a.name, c.name));
            }
            for (const auto& p : a.parents) CHECK(m.specializes(a.name, p));
        }
    }
}

TEST_CASE("model equality ignores declaration order") {
    auto a = parse("model M\nkind B\nkind A\nsubkind S specializes A\n");
    auto data = a.data();
    std::reverse(data.classifiers.begin(), data.classifiers.end());
    CHECK(a == Model(std::move(data)));
    auto c = parse("model M\nkind B\nkind A\nsubkind S specializes B\n");
    CHECK_FALSE(a == c);
}

TEST_CASE("structural invariants reject malformed declarations") {
    auto errors_of = [](const std::string& text) {
        auto r = parse_text(text);
        CHECK_FALSE(r.ok());
        std::string all;
        for (const auto& e : r.errors) all += e.message + "\n";
        return all;
    };
    CHECK(errors_of("model M\nkind A\nkind A\n").find("duplicate classifier") != std::string::npos);
    CHECK(errors_of("model M\nsubkind A specializes B\nsubkind B specializes A\n").find("cycle") != std::string::npos);
    CHECK(errors_of("model M\nkind A specializes Nope\n").find("unknown classifier 'Nope'") != std::string::npos);
    CHECK(errors_of("model M\nkind A\nkind B\nmediation m : A [1..*] -- [1..1] B\n").find("relator source") !=
          std::string::npos);
    CHECK(errors_of("model M\nkind A\nkind B\ncharacterization c : A [1..1] -- [1..1] B\n").find("mode or quality") !=
          std::string::npos);
    CHECK(errors_of("model M\nkind A\nkind B\nparticipation p : A [1..*] -- [1..1] B\n").find("event source") !=
          std::string::npos);
    CHECK(errors_of("model M\nkind A\nrelator R\nmediation m : R [1..*] -- [1..1] A derivedFrom R [1..*]\n")
              .find("derivedFrom is only allowed") != std::string::npos);
    CHECK(errors_of("model M\nquality Q\nspace Q ordered 5..1\n").find("lo > hi") != std::string::npos);
    CHECK(errors_of("model M\nquality Q\nspace Q nominal {a, a}\n").find("duplicate labels") != std::string::npos);
    CHECK(errors_of("model M\nkind K\nspace K ordered 0..1\n").find("not a quality") != std::string::npos);
    CHECK(errors_of("model M\nkind A\nkind B\nkind C\ngenset G general A specifics B, C\n").find("does not specialize") !=
          std::string::npos);
}

TEST_CASE("Model constructor refuses structurally invalid data") {
    ModelData d;
    d.name = "M";
    d.classifiers.push_back({"A", Stereotype::Kind, {"Missing"}, false, {}});
    try {
        Model m(d);
        FAIL("expected IllFormedModel");
    } catch (const OntoError& e) {
        CHECK(e.code() == ErrorCode::IllFormedModel);
    }
}
