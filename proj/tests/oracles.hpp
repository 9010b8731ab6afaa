#pragma once

// Test oracles written independently of the finder's search code.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ontokit/world.hpp"

namespace testing {

// Canonical form of a world: the smallest sorted fact list over every
// relabeling that permutes individual indices within each kind.
using CanonicalForm = std::vector<std::array<std::int64_t, 4>>;

inline CanonicalForm brute_canonical_form(const ontokit::InstanceWorld& w) {
    // interned kinds, type sets, relations and qualities, shared by every call
    static std::map<std::string, int> names;
    auto intern = [&](const std::string& s) { return names.emplace(s, static_cast<int>(names.size())).first->second; };
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < w.individuals.size(); ++i) index[w.individuals[i].id] = i;

    std::map<std::string, std::vector<std::size_t>> byKind;
    for (std::size_t i = 0; i < w.individuals.size(); ++i) byKind[w.individuals[i].kind].push_back(i);
    std::vector<std::vector<std::size_t>> groups;
    for (auto& [k, members] : byKind) groups.push_back(members);

    std::vector<std::int64_t> kindOf(w.individuals.size()), typesOf(w.individuals.size());
    for (std::size_t i = 0; i < w.individuals.size(); ++i) {
        std::string types;
        for (const auto& t : w.individuals[i].types) types += t + " ";
        kindOf[i] = intern(w.individuals[i].kind);
        typesOf[i] = intern(types);
    }
    // renamed individual = kind * 64 + position within the kind
    std::vector<std::int64_t> rename(w.individuals.size());
    CanonicalForm best;
    bool have = false;
    std::function<void(std::size_t)> rec = [&](std::size_t g) {
        if (g == groups.size()) {
            CanonicalForm facts;
            for (std::size_t i = 0; i < w.individuals.size(); ++i) facts.push_back({0, rename[i], typesOf[i], 0});
            for (const auto& l : w.links)
                facts.push_back({1, intern(l.relation), rename[index.at(l.source)], rename[index.at(l.target)]});
            for (const auto& q : w.qualityValues)
                facts.push_back({2, intern(q.quality), rename[index.at(q.bearer)], q.value});
            std::sort(facts.begin(), facts.end());
            if (!have || facts < best) best = std::move(facts);
            have = true;
            return;
        }
        const auto& members = groups[g];
        std::vector<int> idx(members.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
        do {
            for (std::size_t i = 0; i < members.size(); ++i) rename[members[i]] = kindOf[members[i]] * 64 + idx[i];
            rec(g + 1);
        } while (std::next_permutation(idx.begin(), idx.end()));
    };
    rec(0);
    return best;
}

inline std::size_t count_isomorphism_classes(const std::vector<ontokit::InstanceWorld>& worlds) {
    std::set<CanonicalForm> forms;
    for (const auto& w : worlds) forms.insert(brute_canonical_form(w));
    return forms.size();
}

// Naive generator for models made of kinds, roles of kinds, and relators
// whose mediations target kinds or roles. Produces every labeled world
// (relators pick target subsets freely, roles follow from links), then
// filters by multiplicities. Used to cross-check world counts.
struct NaiveMediation {
    std::string name;
    std::string targetKind;
    std::string targetRole; // empty when the target is the kind itself
    int perRelatorMin, perRelatorMax;
    int perTargetMin, perTargetMax; // -1 = unbounded
};

struct NaiveModel {
    std::vector<std::string> kinds;            // sorted
    std::string relator;                       // one relator type
    std::vector<NaiveMediation> mediations;
};

inline std::vector<ontokit::InstanceWorld> naive_worlds(const NaiveModel& m, const std::map<std::string, int>& bound) {
    using ontokit::InstanceWorld;
    std::vector<InstanceWorld> out;
    std::map<std::string, int> count;
    std::function<void(std::size_t)> counts = [&](std::size_t k) {
        if (k <= m.kinds.size()) {
            const std::string& name = k < m.kinds.size() ? m.kinds[k] : m.relator;
            for (int n = 0; n <= bound.at(name); ++n) {
                count[name] = n;
                if (k < m.kinds.size()) counts(k + 1);
                else {
                    // every relator chooses one subset per mediation
                    std::vector<std::vector<std::vector<int>>> options;
                    for (const auto& med : m.mediations) {
                        int pool = count[med.targetKind];
                        std::vector<std::vector<int>> subsets;
                        for (int mask = 0; mask < (1 << pool); ++mask) {
                            std::vector<int> s;
                            for (int i = 0; i < pool; ++i)
                                if (mask & (1 << i)) s.push_back(i);
                            int sz = static_cast<int>(s.size());
                            if (sz >= med.perRelatorMin && (med.perRelatorMax < 0 || sz <= med.perRelatorMax))
                                subsets.push_back(s);
                        }
                        options.push_back(subsets);
                    }
                    int relators = count[m.relator];
                    std::vector<std::size_t> pick(relators * m.mediations.size(), 0);
                    bool any = std::all_of(options.begin(), options.end(), [](const auto& o) { return !o.empty(); });
                    if (!any && relators > 0) continue;
                    while (true) {
                        InstanceWorld w;
                        std::map<std::string, std::set<std::string>> types;
                        for (const auto& kind : m.kinds)
                            for (int i = 0; i < count[kind]; ++i) types[kind + "_" + std::to_string(i)].insert(kind);
                        for (int r = 0; r < relators; ++r) {
                            std::string rid = m.relator + "_" + std::to_string(r);
                            types[rid].insert(m.relator);
                            for (std::size_t md = 0; md < m.mediations.size(); ++md) {
                                const auto& med = m.mediations[md];
                                for (int t : options[md][pick[r * m.mediations.size() + md]]) {
                                    std::string tid = med.targetKind + "_" + std::to_string(t);
                                    w.links.push_back({med.name, rid, tid});
                                    if (!med.targetRole.empty()) types[tid].insert(med.targetRole);
                                }
                            }
                        }
                        bool ok = true;
                        for (const auto& med : m.mediations) {
                            for (const auto& [id, ts] : types) {
                                std::string target = med.targetRole.empty() ? med.targetKind : med.targetRole;
                                if (!ts.count(target)) continue;
                                int n = static_cast<int>(std::count_if(w.links.begin(), w.links.end(), [&](const auto& l) {
                                    return l.relation == med.name && l.target == id;
                                }));
                                if (n < med.perTargetMin || (med.perTargetMax >= 0 && n > med.perTargetMax)) ok = false;
                            }
                        }
                        if (ok) {
                            for (const auto& [id, ts] : types) {
                                auto kind = id.substr(0, id.rfind('_'));
                                w.individuals.push_back({id, kind, {ts.begin(), ts.end()}});
                            }
                            std::sort(w.links.begin(), w.links.end());
                            out.push_back(std::move(w));
                        }
                        std::size_t i = 0;
                        while (i < pick.size()) {
                            std::size_t md = i % m.mediations.size();
                            if (++pick[i] < options[md].size()) break;
                            pick[i++] = 0;
                        }
                        if (i == pick.size()) break;
                    }
                }
            }
        }
    };
    counts(0);
    return out;
}

} // namespace testing
