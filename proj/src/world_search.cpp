#include "world_search.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <set>

#include "ontokit/rules.hpp"

namespace ontokit::detail {

namespace {

constexpr std::size_t kMaxProfiles = 200'000;
constexpr std::size_t kMaxBranches = 5'000'000;
constexpr std::size_t kMaxFamily = 16;

bool is_root(Stereotype s) {
    return s == Stereotype::Kind || s == Stereotype::Relator || s == Stereotype::Event || s == Stereotype::Mode;
}

bool is_dependent_root(Stereotype s) {
    return s == Stereotype::Relator || s == Stereotype::Event || s == Stereotype::Mode;
}

// All sorted combinations of `items` with size in [lo, hi].
void combinations(const std::vector<int>& items, std::int64_t lo, std::int64_t hi, std::vector<std::vector<int>>& out) {
    const auto n = static_cast<std::int64_t>(items.size());
    if (hi < 0 || hi > n) hi = n;
    std::vector<int> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        auto k = static_cast<std::int64_t>(cur.size());
        if (k >= lo && k <= hi) out.push_back(cur);
        if (k == hi) return;
        for (std::size_t i = start; i < items.size(); ++i) {
            cur.push_back(items[i]);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

} // namespace

int WorldSearch::class_index(std::string_view name) const {
    auto it = std::lower_bound(classNames_.begin(), classNames_.end(), name);
    return (it != classNames_.end() && *it == name) ? static_cast<int>(it - classNames_.begin()) : -1;
}

WorldSearch::WorldSearch(const Model& model, const Scope& scope, const FinderOptions& options)
    : model_(model), options_(options) {
    if (has_errors(check(model)))
        throw OntoError(ErrorCode::IllFormedModel, "model '" + model.name() + "' has well-formedness errors");
    if (scope.defaultCount < 0) throw OntoError(ErrorCode::InvalidScope, "negative default scope");
    if (scope.worldLimit < 1) throw OntoError(ErrorCode::InvalidScope, "world limit must be at least 1");
    for (const auto& [name, n] : scope.perClassifier) {
        if (!model.find_classifier(name))
            throw OntoError(ErrorCode::InvalidScope, "scope names unknown classifier '" + name + "'");
        if (n < 0) throw OntoError(ErrorCode::InvalidScope, "negative scope for '" + name + "'");
    }

    for (const auto& c : model.classifiers()) classNames_.push_back(c.name); // already sorted
    build_qualities(scope);
    build_base_roots(scope);
    build_dependent_roots(scope);
    build_materials();

    for (const auto& [name, n] : scope.perClassifier) {
        const auto& c = model.classifier(name);
        if (!is_root(c.stereotype) && c.stereotype != Stereotype::Quality)
            countBounds_.push_back({class_index(name), n});
    }
    build_branches();
}

void WorldSearch::build_qualities(const Scope& scope) {
    for (const auto& [name, values] : scope.qualityValues) {
        const auto* c = model_.find_classifier(name);
        if (!c || c->stereotype != Stereotype::Quality)
            throw OntoError(ErrorCode::InvalidScope, "quality values given for non-quality '" + name + "'");
        if (!model_.find_space(name))
            throw OntoError(ErrorCode::InvalidScope, "quality '" + name + "' has no space");
    }
    for (const auto& c : model_.classifiers()) {
        if (c.stereotype != Stereotype::Quality) continue;
        const auto* space = model_.find_space(c.name);
        if (!space) continue; // not simulated
        QualityInfo q;
        q.name = c.name;
        q.space = space;
        for (const auto& r : model_.relations())
            if (r.kind == RelationKind::Characterization && r.source == c.name) q.bearerTypes.push_back(r.target);
        if (auto it = scope.qualityValues.find(c.name); it != scope.qualityValues.end()) {
            for (const auto& text : it->second) {
                std::int64_t v = 0;
                if (space->ordered()) {
                    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
                    if (ec != std::errc{} || p != text.data() + text.size() || v < space->lo || v > space->hi)
                        throw OntoError(ErrorCode::InvalidScope,
                                        "value '" + text + "' outside the space of '" + c.name + "'");
                } else {
                    auto lit = std::find(space->labels.begin(), space->labels.end(), text);
                    if (lit == space->labels.end())
                        throw OntoError(ErrorCode::InvalidScope, "label '" + text + "' not in the space of '" + c.name + "'");
                    v = lit - space->labels.begin();
                }
                q.domain.push_back(v);
            }
            std::sort(q.domain.begin(), q.domain.end());
            q.domain.erase(std::unique(q.domain.begin(), q.domain.end()), q.domain.end());
            if (q.domain.empty()) throw OntoError(ErrorCode::InvalidScope, "empty value set for '" + c.name + "'");
        } else {
            std::int64_t first = space->ordered() ? space->lo : 0;
            auto n = static_cast<std::int64_t>(std::min<std::size_t>(3, space->size()));
            for (std::int64_t i = 0; i < n; ++i) q.domain.push_back(first + i);
        }
        qualities_.push_back(std::move(q));
    }
}

bool WorldSearch::typeset_valid(const std::vector<std::string>& types) const {
    auto has = [&](const std::string& t) { return std::binary_search(types.begin(), types.end(), t); };
    for (const auto& g : model_.generalizationSets()) {
        if (!has(g.general)) continue;
        auto n = std::count_if(g.specifics.begin(), g.specifics.end(), has);
        if (g.isDisjoint && n > 1) return false;
        if (g.isComplete && n < 1) return false;
    }
    for (const auto& t : types) {
        if (!model_.classifier(t).isAbstract) continue;
        bool refined = std::any_of(types.begin(), types.end(), [&](const std::string& u) { return model_.specializes(u, t); });
        if (!refined) return false;
    }
    return true;
}

std::vector<std::vector<std::pair<int, std::int64_t>>>
WorldSearch::value_tuples(const std::vector<std::string>& types) const {
    std::vector<std::vector<std::pair<int, std::int64_t>>> tuples{{}};
    for (std::size_t qi = 0; qi < qualities_.size(); ++qi) {
        const auto& q = qualities_[qi];
        bool borne = std::any_of(q.bearerTypes.begin(), q.bearerTypes.end(), [&](const std::string& b) {
            return std::binary_search(types.begin(), types.end(), b);
        });
        if (!borne) continue;
        std::vector<std::vector<std::pair<int, std::int64_t>>> next;
        for (const auto& t : tuples) {
            for (auto v : q.domain) {
                auto u = t;
                u.emplace_back(static_cast<int>(qi), v);
                next.push_back(std::move(u));
            }
        }
        tuples = std::move(next);
    }
    return tuples;
}

void WorldSearch::build_base_roots(const Scope& scope) {
    justification_.resize(classNames_.size());
    for (const auto& r : model_.relations()) {
        if (r.kind != RelationKind::Mediation && r.kind != RelationKind::Participation) continue;
        if (!is_relational_role(model_.classifier(r.target).stereotype)) continue;
        // filled with (dependent, rel) pairs once dependents are built
    }

    for (const auto& k : model_.classifiers()) {
        if (k.stereotype != Stereotype::Kind) continue;
        BaseRoot root;
        root.name = k.name;
        root.bound = scope.bound(k.name);
        if (root.bound > options_.maxBaseScope)
            throw OntoError(ErrorCode::ScopeTooLarge, "scope " + std::to_string(root.bound) + " for '" + k.name +
                                                          "' exceeds the cap of " + std::to_string(options_.maxBaseScope));

        std::vector<std::string> family;
        for (const auto& c : model_.classifiers()) {
            if (c.name == k.name || !is_sortal(c.stereotype)) continue;
            auto kinds = kind_ancestors(model_, c.name);
            if (kinds.size() == 1 && kinds.front() == k.name) family.push_back(c.name);
        }
        if (family.size() > kMaxFamily)
            throw OntoError(ErrorCode::ScopeTooLarge, "too many sortal specializations of '" + k.name + "'");

        struct Candidate {
            std::vector<std::string> types;
        };
        std::vector<Candidate> typesets;
        for (std::uint32_t mask = 0; mask < (1u << family.size()); ++mask) {
            std::set<std::string> chosen{k.name};
            for (std::size_t i = 0; i < family.size(); ++i)
                if (mask & (1u << i)) chosen.insert(family[i]);
            bool closed = true;
            std::set<std::string> all = chosen;
            for (const auto& t : chosen) {
                for (const auto& a : model_.ancestors(t)) {
                    if (is_sortal(model_.classifier(a).stereotype) && !chosen.count(a)) closed = false;
                    all.insert(a);
                }
            }
            if (!closed) continue;
            std::vector<std::string> types(all.begin(), all.end());
            if (!typeset_valid(types)) continue;
            typesets.push_back({std::move(types)});
        }
        std::stable_sort(typesets.begin(), typesets.end(), [](const Candidate& a, const Candidate& b) {
            return a.types.size() != b.types.size() ? a.types.size() < b.types.size() : a.types < b.types;
        });

        for (const auto& ts : typesets) {
            for (auto& values : value_tuples(ts.types)) {
                Profile p;
                p.types = ts.types;
                p.member.assign(classNames_.size(), 0);
                for (const auto& t : p.types) {
                    int ci = class_index(t);
                    p.member[ci] = 1;
                    auto st = model_.classifier(t).stereotype;
                    if (st == Stereotype::Role || st == Stereotype::HistoricalRole) p.rolesToJustify.push_back(ci);
                }
                p.values = std::move(values);
                root.profiles.push_back(std::move(p));
            }
        }
        if (root.profiles.size() > kMaxProfiles)
            throw OntoError(ErrorCode::ScopeTooLarge, "too many individual profiles for '" + k.name + "'");
        baseRoots_.push_back(std::move(root));
    }
}

void WorldSearch::build_dependent_roots(const Scope& scope) {
    // A type is base-only when no dependent root can instantiate it.
    auto base_only = [&](const std::string& t) {
        const auto& c = model_.classifier(t);
        if (is_dependent_root(c.stereotype) || c.stereotype == Stereotype::Quality) return false;
        for (const auto& d : model_.descendants(t))
            if (is_dependent_root(model_.classifier(d).stereotype)) return false;
        return true;
    };

    for (const auto& c : model_.classifiers()) {
        if (!is_dependent_root(c.stereotype)) continue;
        for (const auto& p : c.parents) {
            if (!is_non_sortal(model_.classifier(p).stereotype))
                throw OntoError(ErrorCode::Unsupported,
                                "'" + c.name + "' specializes '" + p + "'; only non-sortal parents are simulated");
        }
        DependentRoot d;
        d.name = c.name;
        d.bound = scope.bound(c.name);
        if (d.bound > options_.maxDependentScope)
            throw OntoError(ErrorCode::ScopeTooLarge, "scope " + std::to_string(d.bound) + " for '" + c.name +
                                                          "' exceeds the cap of " +
                                                          std::to_string(options_.maxDependentScope));
        std::set<std::string> types{c.name};
        for (const auto& a : model_.ancestors(c.name)) types.insert(a);
        d.types.assign(types.begin(), types.end());
        d.instantiable = typeset_valid(d.types);
        d.member.assign(classNames_.size(), 0);
        for (const auto& t : d.types) d.member[class_index(t)] = 1;
        for (const auto& r : model_.relations()) {
            bool defining = (r.kind == RelationKind::Mediation || r.kind == RelationKind::Participation ||
                             r.kind == RelationKind::Characterization) &&
                            r.source == c.name;
            if (!defining) continue;
            if (!base_only(r.target))
                throw OntoError(ErrorCode::Unsupported, "'" + r.name + "' targets '" + r.target +
                                                            "', which is not an endurant kind type");
            d.rels.push_back({r.name, class_index(r.target), r.targetMult, r.sourceMult});
        }
        for (std::size_t qi = 0; qi < qualities_.size(); ++qi) {
            const auto& bt = qualities_[qi].bearerTypes;
            if (std::any_of(bt.begin(), bt.end(), [&](const std::string& b) { return types.count(b) > 0; }))
                d.qualities.push_back(static_cast<int>(qi));
        }
        depRoots_.push_back(std::move(d));
    }

    for (std::size_t di = 0; di < depRoots_.size(); ++di) {
        for (std::size_t ri = 0; ri < depRoots_[di].rels.size(); ++ri) {
            const auto& rel = model_.relation(depRoots_[di].rels[ri].name);
            if (rel.kind == RelationKind::Characterization) continue;
            if (!is_relational_role(model_.classifier(rel.target).stereotype)) continue;
            // justifies the target and every role below it
            std::vector<std::string> justified{rel.target};
            for (const auto& d : model_.descendants(rel.target)) justified.push_back(d);
            for (const auto& j : justified)
                justification_[class_index(j)].rels.emplace_back(static_cast<int>(di), static_cast<int>(ri));
        }
    }
}

void WorldSearch::build_materials() {
    for (const auto& r : model_.relations()) {
        if (r.kind != RelationKind::Material) continue;
        auto meds = derivation_mediations(model_, r);
        if (!meds) continue; // unreachable after check()
        MaterialInfo m;
        m.name = r.name;
        m.sourceClass = class_index(r.source);
        m.targetClass = class_index(r.target);
        m.sourceMult = r.sourceMult;
        m.targetMult = r.targetMult;
        m.derivation = r.derivedFrom->mult;
        for (std::size_t di = 0; di < depRoots_.size(); ++di) {
            if (depRoots_[di].name != r.derivedFrom->relator) continue;
            m.dependent = static_cast<int>(di);
            for (std::size_t ri = 0; ri < depRoots_[di].rels.size(); ++ri) {
                if (depRoots_[di].rels[ri].name == meds->first) m.relA = static_cast<int>(ri);
                if (depRoots_[di].rels[ri].name == meds->second) m.relB = static_cast<int>(ri);
            }
        }
        for (const auto& end : {r.source, r.target}) {
            const auto& st = model_.classifier(end).stereotype;
            if (is_dependent_root(st) || st == Stereotype::Quality)
                throw OntoError(ErrorCode::Unsupported, "material '" + r.name + "' has a non-endurant end '" + end + "'");
        }
        materials_.push_back(std::move(m));
    }
}

void WorldSearch::build_branches() {
    // Cartesian product over base roots of profile multisets of size <= bound.
    std::vector<std::vector<std::vector<int>>> perRoot;
    for (const auto& root : baseRoots_) {
        std::vector<std::vector<int>> multisets;
        std::vector<int> cur;
        const int n = static_cast<int>(root.profiles.size());
        std::function<void(int)> rec = [&](int start) {
            multisets.push_back(cur);
            if (multisets.size() > kMaxBranches)
                throw OntoError(ErrorCode::ScopeTooLarge, "too many configurations of '" + root.name + "'");
            if (static_cast<int>(cur.size()) == root.bound) return;
            for (int p = start; p < n; ++p) {
                cur.push_back(p);
                rec(p);
                cur.pop_back();
            }
        };
        rec(0);
        perRoot.push_back(std::move(multisets));
    }
    std::vector<std::vector<int>> current(perRoot.size());
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == perRoot.size()) {
            branches_.push_back(current);
            if (branches_.size() > kMaxBranches) throw OntoError(ErrorCode::ScopeTooLarge, "too many base configurations");
            return;
        }
        for (const auto& m : perRoot[i]) {
            current[i] = m;
            rec(i + 1);
        }
    };
    rec(0);
}

// ---------------------------------------------------------------------------
// Per-branch search

struct WorldSearch::Branch {
    struct BaseInd {
        int root;
        int profile;
        int position;
    };
    struct DepProfile {
        std::vector<std::vector<int>> targets; // per rel, sorted base indices
        std::vector<std::pair<int, std::int64_t>> values;
        std::vector<int> encoding;
    };

    const WorldSearch& s;
    const WorldSink& sink;
    std::atomic<std::uint64_t>& nodes;
    std::vector<BaseInd> base;
    std::vector<std::vector<DepProfile>> depProfiles;
    std::vector<std::vector<std::vector<int>>> candidates;  // [dep][rel] -> base indices
    std::vector<std::vector<std::vector<int>>> counts;      // [dep][rel][base]
    std::vector<std::vector<int>> chosen;                   // [dep] -> profile indices
    std::vector<std::pair<int, int>> groups;                // [begin, end) of interchangeable base individuals
    std::uint64_t localNodes = 0;

    Branch(const WorldSearch& search, const WorldSink& out, std::atomic<std::uint64_t>& n) : s(search), sink(out), nodes(n) {}

    const Profile& profile(int i) const { return s.baseRoots_[base[i].root].profiles[base[i].profile]; }
    bool member(int i, int cls) const { return profile(i).member[cls] != 0; }

    void tick() {
        if (++localNodes % 4096 == 0) charge(4096);
    }

    void flush_nodes() { charge(localNodes % 4096); }

    void charge(std::uint64_t n) {
        if (nodes.fetch_add(n) + n > s.options_.nodeBudget)
            throw OntoError(ErrorCode::ScopeTooLarge,
                            "search exceeded the node budget of " + std::to_string(s.options_.nodeBudget));
    }

    bool setup(const std::vector<std::vector<int>>& config) {
        for (std::size_t r = 0; r < config.size(); ++r) {
            int begin = static_cast<int>(base.size());
            for (std::size_t k = 0; k < config[r].size(); ++k) {
                if (k > 0 && config[r][k] != config[r][k - 1]) {
                    groups.emplace_back(begin, static_cast<int>(base.size()));
                    begin = static_cast<int>(base.size());
                }
                base.push_back({static_cast<int>(r), config[r][k], static_cast<int>(k)});
            }
            if (begin < static_cast<int>(base.size())) groups.emplace_back(begin, static_cast<int>(base.size()));
        }
        for (const auto& cb : s.countBounds_) {
            int n = 0;
            for (int i = 0; i < static_cast<int>(base.size()); ++i) n += member(i, cb.classIndex);
            if (n > cb.bound) return false;
        }
        for (const auto& d : s.depRoots_) {
            auto& cand = candidates.emplace_back();
            auto& cnt = counts.emplace_back();
            for (const auto& rel : d.rels) {
                auto& c = cand.emplace_back();
                for (int i = 0; i < static_cast<int>(base.size()); ++i)
                    if (member(i, rel.targetClass)) c.push_back(i);
                cnt.emplace_back(base.size(), 0);
            }
            depProfiles.push_back(build_dep_profiles(d, cand));
        }
        chosen.resize(s.depRoots_.size());
        return true;
    }

    std::vector<DepProfile> build_dep_profiles(const DependentRoot& d, const std::vector<std::vector<int>>& cand) const {
        std::vector<DepProfile> out;
        if (!d.instantiable || d.bound == 0) return out;
        std::vector<std::vector<std::vector<int>>> options;
        for (std::size_t r = 0; r < d.rels.size(); ++r) {
            auto& opts = options.emplace_back();
            combinations(cand[r], d.rels[r].perDependent.min, d.rels[r].perDependent.max, opts);
            if (opts.empty()) return out;
        }
        std::vector<std::vector<std::pair<int, std::int64_t>>> valueTuples{{}};
        for (int qi : d.qualities) {
            std::vector<std::vector<std::pair<int, std::int64_t>>> next;
            for (const auto& t : valueTuples)
                for (auto v : s.qualities_[qi].domain) {
                    auto u = t;
                    u.emplace_back(qi, v);
                    next.push_back(std::move(u));
                }
            valueTuples = std::move(next);
        }
        std::vector<std::size_t> pick(options.size(), 0);
        while (true) {
            for (const auto& vals : valueTuples) {
                DepProfile p;
                for (std::size_t r = 0; r < options.size(); ++r) {
                    p.targets.push_back(options[r][pick[r]]);
                    p.encoding.push_back(static_cast<int>(p.targets.back().size()));
                    p.encoding.insert(p.encoding.end(), p.targets.back().begin(), p.targets.back().end());
                }
                p.values = vals;
                for (const auto& [qi, v] : vals) p.encoding.push_back(static_cast<int>(v));
                out.push_back(std::move(p));
                if (out.size() > kMaxProfiles)
                    throw OntoError(ErrorCode::ScopeTooLarge, "too many link patterns for '" + d.name + "'");
            }
            std::size_t r = 0;
            while (r < options.size() && ++pick[r] == options[r].size()) pick[r++] = 0;
            if (r == options.size()) break;
        }
        std::sort(out.begin(), out.end(), [](const DepProfile& a, const DepProfile& b) { return a.encoding < b.encoding; });
        return out;
    }

    bool try_add(int d, int p) {
        const auto& dp = depProfiles[d][p];
        const auto& rels = s.depRoots_[d].rels;
        for (std::size_t r = 0; r < rels.size(); ++r) {
            if (rels[r].perTarget.unbounded()) continue;
            for (int i : dp.targets[r])
                if (counts[d][r][i] + 1 > rels[r].perTarget.max) return false;
        }
        for (std::size_t r = 0; r < rels.size(); ++r)
            for (int i : dp.targets[r]) ++counts[d][r][i];
        return true;
    }

    void remove(int d, int p) {
        const auto& dp = depProfiles[d][p];
        for (std::size_t r = 0; r < dp.targets.size(); ++r)
            for (int i : dp.targets[r]) --counts[d][r][i];
    }

    bool lower_bounds_hold(int d) const {
        const auto& rels = s.depRoots_[d].rels;
        for (std::size_t r = 0; r < rels.size(); ++r) {
            if (rels[r].perTarget.min == 0) continue;
            for (int i : candidates[d][r])
                if (counts[d][r][i] < rels[r].perTarget.min) return false;
        }
        return true;
    }

    void search(int d) {
        if (d == static_cast<int>(s.depRoots_.size())) {
            finish();
            return;
        }
        multiset(d, 0);
    }

    void multiset(int d, int start) {
        tick();
        if (lower_bounds_hold(d)) search(d + 1);
        if (static_cast<int>(chosen[d].size()) == s.depRoots_[d].bound) return;
        const int n = static_cast<int>(depProfiles[d].size());
        for (int p = start; p < n; ++p) {
            if (!try_add(d, p)) continue;
            chosen[d].push_back(p);
            multiset(d, p);
            chosen[d].pop_back();
            remove(d, p);
        }
    }

    bool roles_justified() const {
        for (int i = 0; i < static_cast<int>(base.size()); ++i) {
            for (int cls : profile(i).rolesToJustify) {
                bool ok = false;
                for (const auto& [d, r] : s.justification_[cls].rels)
                    if (counts[d][r][i] > 0) {
                        ok = true;
                        break;
                    }
                if (!ok) return false;
            }
        }
        return true;
    }

    // Derived material tuples with the number of relators grounding each.
    std::map<std::pair<int, int>, int> material_tuples(const MaterialInfo& m) const {
        std::map<std::pair<int, int>, int> tuples;
        if (m.dependent < 0) return tuples;
        for (int p : chosen[m.dependent]) {
            const auto& dp = depProfiles[m.dependent][p];
            for (int x : dp.targets[m.relA]) {
                if (!member(x, m.sourceClass)) continue;
                for (int y : dp.targets[m.relB]) {
                    if (m.relA == m.relB && x == y) continue;
                    if (member(y, m.targetClass)) ++tuples[{x, y}];
                }
            }
        }
        return tuples;
    }

    bool materials_hold() const {
        for (const auto& m : s.materials_) {
            auto tuples = material_tuples(m);
            std::vector<int> out(base.size(), 0), in(base.size(), 0);
            for (const auto& [xy, n] : tuples) {
                if (!m.derivation.admits(n)) return false;
                ++out[xy.first];
                ++in[xy.second];
            }
            for (int i = 0; i < static_cast<int>(base.size()); ++i) {
                if (member(i, m.sourceClass) && !m.targetMult.admits(out[i])) return false;
                if (member(i, m.targetClass) && !m.sourceMult.admits(in[i])) return false;
            }
        }
        return true;
    }

    bool count_bounds_hold() const {
        for (const auto& cb : s.countBounds_) {
            int n = 0;
            for (int i = 0; i < static_cast<int>(base.size()); ++i) n += member(i, cb.classIndex);
            for (std::size_t d = 0; d < s.depRoots_.size(); ++d)
                if (s.depRoots_[d].member[cb.classIndex]) n += static_cast<int>(chosen[d].size());
            if (n > cb.bound) return false;
        }
        return true;
    }

    std::vector<std::vector<std::vector<int>>> dependents_under(const std::vector<int>& perm) const {
        std::vector<std::vector<std::vector<int>>> out(chosen.size());
        for (std::size_t d = 0; d < chosen.size(); ++d) {
            for (int p : chosen[d]) {
                const auto& dp = depProfiles[d][p];
                std::vector<int> enc;
                for (const auto& t : dp.targets) {
                    enc.push_back(static_cast<int>(t.size()));
                    std::vector<int> mapped;
                    for (int i : t) mapped.push_back(perm[i]);
                    std::sort(mapped.begin(), mapped.end());
                    enc.insert(enc.end(), mapped.begin(), mapped.end());
                }
                for (const auto& [qi, v] : dp.values) enc.push_back(static_cast<int>(v));
                out[d].push_back(std::move(enc));
            }
            std::sort(out[d].begin(), out[d].end());
        }
        return out;
    }

    // The current world is canonical iff no within-group permutation of base
    // individuals yields a lexicographically smaller dependent encoding.
    bool canonical() const {
        bool anyDependents = std::any_of(chosen.begin(), chosen.end(), [](const auto& c) { return !c.empty(); });
        bool anySymmetry = std::any_of(groups.begin(), groups.end(), [](const auto& g) { return g.second - g.first > 1; });
        if (!anyDependents || !anySymmetry) return true;

        std::vector<int> identity(base.size());
        std::iota(identity.begin(), identity.end(), 0);
        const auto original = dependents_under(identity);
        std::vector<int> perm = identity;
        bool smaller = false;
        std::function<void(std::size_t)> rec = [&](std::size_t g) {
            if (smaller) return;
            if (g == groups.size()) {
                if (perm != identity && dependents_under(perm) < original) smaller = true;
                return;
            }
            auto [b, e] = groups[g];
            std::vector<int> slice(perm.begin() + b, perm.begin() + e);
            std::sort(slice.begin(), slice.end());
            do {
                std::copy(slice.begin(), slice.end(), perm.begin() + b);
                rec(g + 1);
                if (smaller) return;
            } while (std::next_permutation(slice.begin(), slice.end()));
            std::copy(identity.begin() + b, identity.begin() + e, perm.begin() + b);
        };
        rec(0);
        return !smaller;
    }

    void finish() {
        if (!roles_justified() || !materials_hold() || !count_bounds_hold() || !canonical()) return;
        emit();
    }

    std::string base_id(int i) const { return s.baseRoots_[base[i].root].name + "_" + std::to_string(base[i].position); }

    void emit() {
        WorldKey key;
        int total = static_cast<int>(base.size());
        for (const auto& c : chosen) total += static_cast<int>(c.size());
        key.push_back(total);
        for (std::size_t r = 0; r < s.baseRoots_.size(); ++r) {
            std::vector<int> ps;
            for (const auto& b : base)
                if (b.root == static_cast<int>(r)) ps.push_back(b.profile);
            key.push_back(static_cast<int>(ps.size()));
            key.insert(key.end(), ps.begin(), ps.end());
        }
        for (std::size_t d = 0; d < chosen.size(); ++d) {
            key.push_back(static_cast<int>(chosen[d].size()));
            for (int p : chosen[d]) {
                const auto& enc = depProfiles[d][p].encoding;
                key.push_back(static_cast<int>(enc.size()));
                key.insert(key.end(), enc.begin(), enc.end());
            }
        }

        InstanceWorld w;
        for (int i = 0; i < static_cast<int>(base.size()); ++i) {
            const auto& p = profile(i);
            w.individuals.push_back({base_id(i), s.baseRoots_[base[i].root].name, p.types});
            for (const auto& [qi, v] : p.values) w.qualityValues.push_back({s.qualities_[qi].name, base_id(i), v});
        }
        for (std::size_t d = 0; d < chosen.size(); ++d) {
            const auto& root = s.depRoots_[d];
            for (std::size_t j = 0; j < chosen[d].size(); ++j) {
                std::string id = root.name + "_" + std::to_string(j);
                const auto& dp = depProfiles[d][chosen[d][j]];
                w.individuals.push_back({id, root.name, root.types});
                for (std::size_t r = 0; r < dp.targets.size(); ++r)
                    for (int i : dp.targets[r]) w.links.push_back({root.rels[r].name, id, base_id(i)});
                for (const auto& [qi, v] : dp.values) w.qualityValues.push_back({s.qualities_[qi].name, id, v});
            }
        }
        for (const auto& m : s.materials_)
            for (const auto& [xy, n] : material_tuples(m)) w.links.push_back({m.name, base_id(xy.first), base_id(xy.second)});

        std::stable_sort(w.individuals.begin(), w.individuals.end(), [](const Individual& a, const Individual& b) {
            return a.kind < b.kind;
        });
        std::sort(w.links.begin(), w.links.end());
        std::sort(w.qualityValues.begin(), w.qualityValues.end());
        sink(key, std::move(w));
    }
};

void WorldSearch::run_branch(std::size_t b, const WorldSink& sink, std::atomic<std::uint64_t>& nodes) const {
    Branch br(*this, sink, nodes);
    if (br.setup(branches_[b])) br.search(0);
    br.flush_nodes();
}

} // namespace ontokit::detail
