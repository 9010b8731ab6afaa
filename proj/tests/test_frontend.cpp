#include <doctest.h>

#include <algorithm>
#include <random>

#include "ontokit/frontend.hpp"
#include "support.hpp"

using namespace ontokit;
using testing::fixture;
using testing::parse;
using testing::read_file;

namespace {

std::vector<std::string> names_of(const std::vector<Classifier>& cs) {
    std::vector<std::string> out;
    for (const auto& c : cs) out.push_back(c.name);
    return out;
}

const char* kFixtures[] = {"healthcare_relator.onto", "healthcare_event.onto", "healthcare_plain.onto", "severity.onto"};

} // namespace

TEST_CASE("minimal program") {
    auto m = parse("model M\nkind Person");
    CHECK(m.name() == "M");
    REQUIRE(m.classifiers().size() == 1);
    CHECK(m.classifiers()[0].name == "Person");
    CHECK(m.classifiers()[0].stereotype == Stereotype::Kind);
    CHECK(m.classifiers()[0].span == SourceSpan{2, 6, 6});
}

TEST_CASE("relator fixture contents") {
    auto m = fixture("healthcare_relator.onto");
    std::vector<std::string> expected = {"HealthcareProvider", "Organization", "PathologicalCondition", "Patient",
                                         "Person", "Severity", "Treatment", "UnhealthyPerson"};
    CHECK(names_of(m.classifiers()) == expected);
    const auto& inv = m.relation("involvesPatient");
    CHECK(inv.kind == RelationKind::Mediation);
    CHECK(inv.sourceMult.str() == "1..*");
    CHECK(inv.targetMult.str() == "1..1");
    CHECK(m.relation("involvesProvider").target == "HealthcareProvider");
    const auto& mat = m.relation("treatedBy");
    REQUIRE(mat.derivedFrom);
    CHECK(mat.derivedFrom->relator == "Treatment");
    CHECK(mat.derivedFrom->mult.str() == "1..*");
    const auto& cmp = m.relation("moreSevereThan");
    REQUIRE(cmp.via);
    CHECK(cmp.via->quality == "Severity");
    CHECK(cmp.via->direction == Direction::Desc);
    REQUIRE(m.find_space("Severity"));
    CHECK(m.find_space("Severity")->lo == 0);
    CHECK(m.find_space("Severity")->hi == 100);
    CHECK(m.relations().size() == 6);
}

TEST_CASE("lexical error reports the expected token") {
    auto r = parse_text("kind 123");
    REQUIRE_FALSE(r.ok());
    auto it = std::find_if(r.errors.begin(), r.errors.end(), [](const ParseError& e) {
        return std::find(e.expected.begin(), e.expected.end(), "identifier") != e.expected.end();
    });
    REQUIRE(it != r.errors.end());
    CHECK(it->span.line == 1);
    for (const auto& e : r.errors) CHECK_FALSE(e.message.empty());
}

TEST_CASE("recovery reports several malformed declarations") {
    auto r = parse_text("model M\nkind\nkind Person\nrole 9 specializes Person\nmaterial m : Person -- Person\n");
    REQUIRE_FALSE(r.ok());
    CHECK(r.errors.size() >= 3);
    std::vector<int> lines;
    for (const auto& e : r.errors) lines.push_back(e.span.line);
    CHECK(std::find(lines.begin(), lines.end(), 3) != lines.end());
    CHECK(std::find(lines.begin(), lines.end(), 4) != lines.end());
    CHECK(std::find(lines.begin(), lines.end(), 5) != lines.end());
}

TEST_CASE("comparatives take no multiplicities, other relations require them") {
    CHECK_FALSE(parse_text("model M\nkind A\nquality Q\nspace Q ordered 0..3\n"
                           "characterization c : Q [1..1] -- [1..1] A\n"
                           "comparative r : A [0..*] -- [0..*] A via Q desc\n")
                    .ok());
    CHECK(parse_text("model M\nkind A\nquality Q\nspace Q ordered 0..3\n"
                     "characterization c : Q [1..1] -- [1..1] A\ncomparative r : A -- A via Q desc\n")
              .ok());
    CHECK_FALSE(parse_text("model M\nkind A\nmaterial r : A -- A\n").ok());
}

TEST_CASE("comments, abstract classifiers and generalization sets") {
    auto m = parse("# header\nmodel M # trailing\nabstract kind A\nsubkind B specializes A\nsubkind C specializes A\n"
                   "genset G disjoint complete general A specifics C, B\n");
    CHECK(m.classifier("A").isAbstract);
    REQUIRE(m.generalizationSets().size() == 1);
    const auto& g = m.generalizationSets()[0];
    CHECK(g.isDisjoint);
    CHECK(g.isComplete);
    CHECK(g.specifics == std::vector<std::string>{"B", "C"});
}

TEST_CASE("reserved words cannot name declarations") {
    CHECK_FALSE(parse_text("model M\nkind role\n").ok());
    CHECK_FALSE(parse_text("model M\nkind space\n").ok());
}

TEST_CASE("structural errors surface after syntax succeeds") {
    auto r = parse_text("model M\nrole P specializes Ghost\n");
    REQUIRE_FALSE(r.ok());
    CHECK(r.errors[0].span.line == 2);
    CHECK(r.errors[0].message.find("Ghost") != std::string::npos);
}

TEST_CASE("empty model JSON") {
    auto json = emit_json(parse("model M"));
    CHECK(json.find("\"classifiers\": []") != std::string::npos);
    CHECK(json.find("\"relations\": []") != std::string::npos);
    CHECK(json.find("\"generalizationSets\": []") != std::string::npos);
    CHECK(json.find("\"qualitySpaces\": []") != std::string::npos);
    CHECK(json.back() == '\n');
}

TEST_CASE("JSON emission is deterministic and independent of declaration order") {
    auto a = parse("model M\nkind B\nkind A\nrelator R\nmediation m2 : R [1..*] -- [1..1] A\n"
                   "mediation m1 : R [1..*] -- [1..1] B\n");
    auto b = parse("model M\nrelator R\nkind A\nkind B\nmediation m1 : R [1..*] -- [1..1] B\n"
                   "mediation m2 : R [1..*] -- [1..1] A\n");
    CHECK(emit_json(a) == emit_json(a));
    // spans differ, so compare after stripping them through the DSL
    CHECK(emit_dsl(a) == emit_dsl(b));
    auto json = emit_json(a);
    CHECK(json.find("\"A\"") < json.find("\"B\""));
    CHECK(json.find("\"R\"") > json.find("\"B\"")); // kinds sort before relators
}

TEST_CASE("JSON round trip on every fixture") {
    for (auto name : kFixtures) {
        CAPTURE(name);
        auto m = fixture(name);
        auto r = load_json(emit_json(m));
        REQUIRE(r.ok());
        CHECK(*r.model == m);
        CHECK(emit_json(*r.model) == emit_json(m));
    }
}

TEST_CASE("DSL rendering reaches a fixpoint") {
    for (auto name : kFixtures) {
        CAPTURE(name);
        auto m = fixture(name);
        auto text = emit_dsl(m);
        auto again = parse(text);
        CHECK(emit_dsl(again) == text);
        CHECK(again.classifiers().size() == m.classifiers().size());
        CHECK(again.relations().size() == m.relations().size());
    }
}

TEST_CASE("JSON schema errors carry paths") {
    auto empty = load_json("{}");
    REQUIRE_FALSE(empty.ok());
    CHECK(empty.errors[0].message.find("missing field: name") != std::string::npos);

    auto text = testing::replace_once(emit_json(parse("model M\nkind A\n")), "\"parents\"", "\"parentz\"");
    auto noParents = load_json(text);
    REQUIRE_FALSE(noParents.ok());
    CHECK(noParents.errors[0].message.find("$.classifiers[0]") != std::string::npos);
}

TEST_CASE("unknown stereotype in JSON is named") {
    auto text = emit_json(parse("model M\nkind A\nrole P specializes A\nrelator R\n"
                                "mediation m : R [1..*] -- [2..2] P\n"));
    text = testing::replace_once(text, "\"stereotype\": \"role\"", "\"stereotype\": \"roleish\"");
    auto r = load_json(text);
    REQUIRE_FALSE(r.ok());
    CHECK(r.errors[0].message.find("roleish") != std::string::npos);
    CHECK(r.errors[0].message.find("$.classifiers[") != std::string::npos);
}

TEST_CASE("malformed JSON bytes") {
    auto r = load_json("{\"name\": ");
    REQUIRE_FALSE(r.ok());
    CHECK_FALSE(r.errors[0].message.empty());
}

TEST_CASE("parsing is total over arbitrary bytes") {
    std::mt19937 rng(1234);
    const std::string base = read_file(testing::fixture_path("healthcare_relator.onto"));
    const std::string alphabet = "model kind role [ ] .. -- : , * { } 0 1 9 x_ \n # via desc derivedFrom\xff\x01";
    for (int i = 0; i < 500; ++i) {
        std::string text = base;
        int edits = 1 + static_cast<int>(rng() % 6);
        for (int e = 0; e < edits; ++e) {
            std::size_t pos = rng() % (text.size() + 1);
            switch (rng() % 3) {
            case 0: text.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
            case 1: if (pos < text.size()) text.erase(pos, 1 + rng() % 8); break;
            default: if (pos < text.size()) text[pos] = static_cast<char>(rng() % 256); break;
            }
        }
        auto r = parse_text(text);
        CHECK(r.ok() != !r.errors.empty());
        for (const auto& err : r.errors) {
            CHECK(err.span.line >= 1);
            CHECK(err.span.column >= 1);
            CHECK_FALSE(err.message.empty());
        }
        auto j = load_json(text);
        CHECK(j.ok() != !j.errors.empty());
    }
}
