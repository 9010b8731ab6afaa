#include <doctest.h>

#include <random>

#include "ontokit/finder.hpp"
#include "ontokit/lint.hpp"
#include "ontokit/rules.hpp"
#include "ontokit/unpack.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ontokit;
using testing::parse;

namespace {

struct RandomMult {
    int lo;
    int hi; // -1 = unbounded
    std::string str() const { return std::to_string(lo) + ".." + (hi < 0 ? "*" : std::to_string(hi)); }
};

RandomMult random_mult(std::mt19937& rng, int maxLo) {
    int lo = static_cast<int>(rng() % (maxLo + 1));
    int hi = rng() % 3 == 0 ? -1 : lo + static_cast<int>(rng() % 2);
    if (hi == 0) hi = 1;
    return {lo, hi};
}

struct RandomRelator {
    RandomMult relA, perA, relB, perB; // relX: relators per X, perX: X per relator
    std::string dsl() const {
        return "model P\nkind A\nkind B\nrelator R\n"
               "mediation ma : R [" + relA.str() + "] -- [" + perA.str() + "] A\n"
               "mediation mb : R [" + relB.str() + "] -- [" + perB.str() + "] B\n";
    }
    testing::NaiveModel naive() const {
        return {{"A", "B"},
                "R",
                {{"ma", "A", "", perA.lo, perA.hi, relA.lo, relA.hi}, {"mb", "B", "", perB.lo, perB.hi, relB.lo, relB.hi}}};
    }
};

RandomRelator random_relator(std::mt19937& rng) {
    RandomRelator r;
    r.relA = random_mult(rng, 1);
    r.relB = random_mult(rng, 1);
    r.perA = random_mult(rng, 1);
    r.perB = random_mult(rng, 1);
    // a relator mediates at least one individual on each side
    if (r.perA.lo == 0) r.perA.lo = 1;
    if (r.perB.lo == 0) r.perB.lo = 1;
    return r;
}

Scope bounded(int a, int b, int r) {
    Scope s;
    s.perClassifier = {{"A", a}, {"B", b}, {"R", r}};
    s.worldLimit = Scope::kNoLimit;
    return s;
}

bool within(std::int64_t n, const Multiplicity& m) { return n >= m.min && (m.unbounded() || n <= m.max); }

} // namespace

TEST_CASE("random relator models: finder matches the naive generator, serial matches parallel") {
    std::mt19937 rng(20261019);
    for (int trial = 0; trial < 25; ++trial) {
        auto spec = random_relator(rng);
        auto m = parse(spec.dsl());
        CAPTURE(spec.dsl());
        REQUIRE(check(m).empty());
        int a = 1 + static_cast<int>(rng() % 2), b = 1 + static_cast<int>(rng() % 2), r = static_cast<int>(rng() % 3);
        auto scope = bounded(a, b, r);
        auto par = enumerate(m, scope);
        auto ser = enumerate(m, scope, FinderOptions{.parallel = false});
        CHECK(par.worlds == ser.worlds);
        CHECK(par.total == par.worlds.size());
        auto naive = testing::naive_worlds(spec.naive(), {{"A", a}, {"B", b}, {"R", r}});
        CHECK(par.total == testing::count_isomorphism_classes(naive));
        for (const auto& w : par.worlds) CHECK(validate_world(m, w).empty());
    }
}

TEST_CASE("derived cardinalities are sound and their lower bounds are attained") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        auto spec = random_relator(rng);
        auto m = parse(spec.dsl());
        CAPTURE(spec.dsl());
        auto cards = derive_material_cardinalities(m, "R");
        REQUIRE(cards.typeA == "A");
        std::int64_t minB = -1, minA = -1;
        bool anyTuple = false;
        for_each_world(m, bounded(2, 2, 3), [&](const InstanceWorld& w) {
            std::map<std::string, std::set<std::string>> partnersOfA, partnersOfB;
            std::map<std::pair<std::string, std::string>, int> relatorsPerTuple;
            for (const auto& id : w.members("A")) partnersOfA[id];
            for (const auto& id : w.members("B")) partnersOfB[id];
            for (const auto& la : w.links) {
                if (la.relation != "ma") continue;
                for (const auto& lb : w.links) {
                    if (lb.relation != "mb" || lb.source != la.source) continue;
                    partnersOfA[la.target].insert(lb.target);
                    partnersOfB[lb.target].insert(la.target);
                    ++relatorsPerTuple[{la.target, lb.target}];
                }
            }
            for (const auto& [id, ps] : partnersOfA) {
                auto n = static_cast<std::int64_t>(ps.size());
                CHECK(within(n, cards.endB));
                minB = minB < 0 ? n : std::min(minB, n);
            }
            for (const auto& [id, ps] : partnersOfB) {
                auto n = static_cast<std::int64_t>(ps.size());
                CHECK(within(n, cards.endA));
                minA = minA < 0 ? n : std::min(minA, n);
            }
            for (const auto& [tuple, n] : relatorsPerTuple) {
                CHECK(within(n, cards.perTuple));
                anyTuple = true;
            }
        });
        if (minB >= 0) CHECK(minB == cards.endB.min);
        if (minA >= 0) CHECK(minA == cards.endA.min);
        CHECK(anyTuple);
    }
}

TEST_CASE("unpacking random material relations yields well-formed models") {
    std::mt19937 rng(99);
    const char* ends[] = {"kind", "subkind", "phase", "role", "category"};
    for (int trial = 0; trial < 40; ++trial) {
        std::string dsl = "model P\nkind Base\n";
        std::string names[2] = {"E0", "E1"};
        int phases = 0;
        for (int i = 0; i < 2; ++i) {
            std::string st = ends[rng() % 5];
            if (st == "kind") dsl += "kind " + names[i] + "\n";
            else if (st == "category") dsl += "category " + names[i] + "\nkind K" + names[i] + " specializes " + names[i] + "\n";
            else if (st == "role")
                dsl += "role " + names[i] + " specializes Base\nrelator Holder" + names[i] + "\nmediation h" + names[i] +
                       " : Holder" + names[i] + " [1..*] -- [2..2] " + names[i] + "\n";
            else dsl += st + " " + names[i] + " specializes Base\n";
            phases += st == "phase";
        }
        if (phases == 2) dsl += "genset Life disjoint complete general Base specifics E0, E1\n";
        auto lo = random_mult(rng, 2), hi = random_mult(rng, 2);
        dsl += "material rel : E0 [" + lo.str() + "] -- [" + hi.str() + "] E1\n";
        CAPTURE(dsl);
        auto m = parse(dsl);
        for (const auto& d : check(m)) REQUIRE(d.ruleId == "R6");
        auto out = apply_plan(m, unpack_material(m, "rel", "Truthmaker", {"RoleA", "RoleB"}));
        CHECK(check(out).empty());
        auto tight = tighten_material(out, "rel");
        CHECK(check(tight).empty());
        for (const auto& c : m.classifiers()) CHECK(out.find_classifier(c.name));
    }
}

TEST_CASE("witnesses satisfy their goals and validate") {
    auto m = testing::fixture("healthcare_event.onto");
    const char* goals[] = {"x:Patient", "x:Patient, t:Treatment, participatesPatient(t,x)",
                           "x:InstitutionalHealthcareProvider, t:Treatment, participatesProvider(t,x)",
                           "x:Person, y:Person, t:Treatment, participatesPatient(t,x), participatesProvider(t,y)"};
    Scope s;
    s.defaultCount = 2;
    for (auto text : goals) {
        CAPTURE(text);
        auto goal = Goal::parse(text);
        auto w = find_witness(m, s, goal);
        REQUIRE(w);
        CHECK(satisfies(m, *w, goal));
        CHECK(validate_world(m, *w).empty());
        CHECK(*w == *find_witness(m, s, goal, FinderOptions{.parallel = false}));
    }
}
