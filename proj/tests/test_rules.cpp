#include <doctest.h>

#include <random>

#include "mutants.hpp"
#include "ontokit/rules.hpp"
#include "support.hpp"

using namespace ontokit;
using testing::fixture;
using testing::parse;

namespace {

std::vector<std::string> ids(const std::vector<Diagnostic>& ds) {
    std::vector<std::string> out;
    for (const auto& d : ds) out.push_back(d.ruleId);
    return out;
}

} // namespace

TEST_CASE("catalog severities") {
    const auto& cat = rule_catalog();
    REQUIRE(cat.size() == 10);
    for (const auto& r : cat) CHECK(r.severity == (r.id == "R8" ? Severity::Warning : Severity::Error));
}

TEST_CASE("well-formed fixtures pass the catalog") {
    CHECK(check(fixture("healthcare_relator.onto")).empty());
    CHECK(check(fixture("healthcare_event.onto")).empty());
    CHECK(check(fixture("severity.onto")).empty());
}

TEST_CASE("the descriptive model lacks a truthmaker") {
    auto ds = check(fixture("healthcare_plain.onto"));
    CHECK(ids(ds) == std::vector<std::string>{"R6"});
    CHECK(ds[0].severity == Severity::Error);
    CHECK(ds[0].span.line == 8);
}

TEST_CASE("role without mediation") {
    auto m = parse("model M\nkind Person\nrole Patient specializes Person\n");
    auto ds = check(m);
    REQUIRE(ids(ds) == std::vector<std::string>{"R4"});
    CHECK(ds[0].span == m.classifier("Patient").span);
    CHECK(ds[0].related == std::vector<std::string>{"Patient"});
}

TEST_CASE("relational dependence is inherited") {
    auto m = parse("model M\nkind Person\nrole Patient specializes Person\nrole Outpatient specializes Patient\n"
                   "kind Clinic\nrole Host specializes Clinic\nrelator Visit\n"
                   "mediation visitor : Visit [1..*] -- [1..1] Patient\nmediation host : Visit [1..*] -- [1..1] Host\n");
    CHECK(check(m).empty());
}

TEST_CASE("mutation suite: each mutant violates exactly its rule") {
    for (const auto& mutant : testing::rule_mutants()) {
        CAPTURE(mutant.rule);
        auto ds = check(parse(mutant.source));
        CHECK(ids(ds) == std::vector<std::string>{mutant.rule});
    }
}

TEST_CASE("phases grouped by a partition silence R8") {
    auto src = testing::read_file(testing::fixture_path("healthcare_relator.onto")) +
               "phase HealthyPerson specializes Person\n"
               "genset Health disjoint complete general Person specifics HealthyPerson, UnhealthyPerson\n";
    CHECK(check(parse(src)).empty());
    auto partial = testing::read_file(testing::fixture_path("healthcare_relator.onto")) +
                   "phase HealthyPerson specializes Person\n"
                   "genset Health disjoint general Person specifics HealthyPerson, UnhealthyPerson\n";
    CHECK(ids(check(parse(partial))) == std::vector<std::string>{"R8"});
}

TEST_CASE("diagnostics are sorted by span, then rule number") {
    auto m = parse("model M\nkind A\nrole R1x specializes A\nrole R2x specializes A\nkind K specializes R1x\n");
    auto ds = check(m);
    REQUIRE(ds.size() >= 3);
    for (std::size_t i = 1; i < ds.size(); ++i) CHECK_FALSE(diagnostic_less(ds[i], ds[i - 1]));

    Diagnostic a, b;
    a.ruleId = "R10";
    b.ruleId = "R2";
    CHECK(diagnostic_less(b, a));
}

TEST_CASE("check is deterministic") {
    for (const auto& mutant : testing::rule_mutants()) {
        auto m = parse(mutant.source);
        CHECK(diagnostics_to_json(&m, check(m)) == diagnostics_to_json(&m, check(m)));
    }
}

TEST_CASE("diagnostic JSON shape") {
    auto m = fixture("healthcare_plain.onto");
    auto json = diagnostics_to_json(&m, check(m));
    for (auto key : {"\"ruleId\": \"R6\"", "\"severity\": \"error\"", "\"span\"", "\"line\": 8", "\"col\"", "\"len\"",
                     "\"related\"", "\"message\""})
        CHECK(json.find(key) != std::string::npos);
    CHECK(diagnostics_to_json(&m, {}) == "[]\n");
}

namespace {

std::string random_model(std::mt19937& rng) {
    static const char* stereos[] = {"kind", "kind", "subkind", "subkind", "phase", "category", "role"};
    std::string text = "model R\n";
    const int n = 3 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) {
        text += std::string(stereos[rng() % 7]) + " C" + std::to_string(i);
        bool first = true;
        for (int j = 0; j < i; ++j) {
            if (rng() % 3) continue;
            text += (first ? " specializes C" : ", C") + std::to_string(j);
            first = false;
        }
        text += "\n";
    }
    return text;
}

} // namespace

TEST_CASE("a clean check guarantees every sortal has an ultimate kind") {
    std::mt19937 rng(99);
    int clean = 0;
    for (int round = 0; round < 400; ++round) {
        auto m = parse(random_model(rng));
        auto ds = check(m);
        bool errors = has_errors(ds);
        if (!errors) ++clean;
        for (const auto& c : m.classifiers()) {
            if (!is_sortal(c.stereotype)) continue;
            if (!errors) CHECK_NOTHROW(ultimate_kind(m, c.name));
        }
    }
    CHECK(clean > 10);
}
