#include "ontokit/finder.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>

#include <json.hpp>

#include "world_search.hpp"

namespace ontokit {

namespace {

using detail::WorldKey;
using detail::WorldSearch;

// Runs `body(branch)` over every branch, across OpenMP threads unless the
// serial reference loop is requested. The first exception is rethrown.
template <typename Body>
void for_branches(const WorldSearch& search, const FinderOptions& options, Body&& body) {
    const auto n = static_cast<long>(search.branch_count());
    if (!options.parallel) {
        for (long b = 0; b < n; ++b) body(static_cast<std::size_t>(b));
        return;
    }
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
#pragma omp parallel for schedule(dynamic, 1)
    for (long b = 0; b < n; ++b) {
        if (failed.load()) continue;
        try {
            body(static_cast<std::size_t>(b));
        } catch (...) {
#pragma omp critical(ontokit_failure)
            {
                if (!failure) failure = std::current_exception();
            }
            failed = true;
        }
    }
    if (failure) std::rethrow_exception(failure);
}

struct Keyed {
    WorldKey key;
    InstanceWorld world;
};

bool key_less(const Keyed& a, const Keyed& b) { return a.key < b.key; }

void keep_smallest(std::vector<Keyed>& v, std::size_t limit) {
    if (v.size() <= limit) return;
    std::nth_element(v.begin(), v.begin() + static_cast<long>(limit), v.end(), key_less);
    v.resize(limit);
}

} // namespace

Enumeration enumerate(const Model& model, const Scope& scope, const FinderOptions& options) {
    WorldSearch search(model, scope, options);
    const std::size_t limit = scope.worldLimit;
    std::vector<std::vector<Keyed>> kept(search.branch_count());
    std::vector<std::size_t> counts(search.branch_count(), 0);
    std::atomic<std::uint64_t> nodes{0};

    for_branches(search, options, [&](std::size_t b) {
        auto& mine = kept[b];
        search.run_branch(
            b,
            [&](const WorldKey& key, InstanceWorld&& w) {
                ++counts[b];
                mine.push_back({key, std::move(w)});
                if (limit != Scope::kNoLimit && mine.size() > 2 * limit + 16) keep_smallest(mine, limit);
            },
            nodes);
        if (limit != Scope::kNoLimit) keep_smallest(mine, limit);
    });

    std::vector<Keyed> all;
    Enumeration result;
    for (std::size_t b = 0; b < kept.size(); ++b) {
        result.total += counts[b];
        for (auto& k : kept[b]) all.push_back(std::move(k));
    }
    std::sort(all.begin(), all.end(), key_less);
    if (all.size() > limit) all.resize(limit);
    for (auto& k : all) result.worlds.push_back(std::move(k.world));
    result.exhaustive = result.total <= limit;
    return result;
}

std::vector<InstanceWorld> enumerate_worlds(const Model& model, const Scope& scope, const FinderOptions& options) {
    return enumerate(model, scope, options).worlds;
}

std::optional<InstanceWorld> find_witness(const Model& model, const Scope& scope, const Goal& goal,
                                          const FinderOptions& options) {
    validate_goal(model, goal);
    WorldSearch search(model, scope, options);
    std::vector<std::optional<Keyed>> best(search.branch_count());
    std::atomic<std::uint64_t> nodes{0};

    for_branches(search, options, [&](std::size_t b) {
        search.run_branch(
            b,
            [&](const WorldKey& key, InstanceWorld&& w) {
                if (best[b] && !(key < best[b]->key)) return;
                if (satisfies(model, w, goal)) best[b] = Keyed{key, std::move(w)};
            },
            nodes);
    });

    std::optional<Keyed> winner;
    for (auto& b : best)
        if (b && (!winner || b->key < winner->key)) winner = std::move(b);
    if (!winner) return std::nullopt;
    return std::move(winner->world);
}

void for_each_world(const Model& model, const Scope& scope, const std::function<void(const InstanceWorld&)>& visit,
                    const FinderOptions& options) {
    WorldSearch search(model, scope, options);
    std::atomic<std::uint64_t> nodes{0};
    for (std::size_t b = 0; b < search.branch_count(); ++b)
        search.run_branch(b, [&](const WorldKey&, InstanceWorld&& w) { visit(w); }, nodes);
}

// ---------------------------------------------------------------------------
// Comparatives

namespace {

bool beats(Direction d, std::int64_t v, std::int64_t w) {
    switch (d) {
    case Direction::Asc: return v < w;
    case Direction::Desc: return v > w;
    case Direction::AscOrEqual: return v <= w;
    case Direction::DescOrEqual: return v >= w;
    }
    return false;
}

const QualitySpace& ordered_space(const Model& model, std::string_view quality, std::string_view relation) {
    const auto* space = model.find_space(quality);
    if (!space || !space->ordered())
        throw OntoError(ErrorCode::UnorderedSpace,
                        "'" + std::string(relation) + "' is not grounded in an ordered space of '" + std::string(quality) + "'");
    return *space;
}

bool bears(const Model& model, const InstanceWorld& world, std::string_view quality, const Individual& ind) {
    for (const auto& r : model.relations())
        if (r.kind == RelationKind::Characterization && r.source == quality &&
            std::binary_search(ind.types.begin(), ind.types.end(), r.target))
            return true;
    (void)world;
    return false;
}

// Own values of the quality plus those of the modes characterizing `x`.
std::vector<std::int64_t> compared_values(const Model& model, const InstanceWorld& world, std::string_view quality,
                                          const Individual& x) {
    std::vector<std::int64_t> out;
    auto take = [&](const Individual& bearer) {
        if (!bears(model, world, quality, bearer)) return;
        auto v = world.value(quality, bearer.id);
        if (!v)
            throw OntoError(ErrorCode::MissingQualityValue,
                            "'" + bearer.id + "' has no value for '" + std::string(quality) + "'");
        out.push_back(*v);
    };
    take(x);
    for (const auto& l : world.links) {
        if (l.target != x.id) continue;
        const auto* r = model.find_relation(l.relation);
        if (!r || r->kind != RelationKind::Characterization) continue;
        if (model.classifier(r->source).stereotype != Stereotype::Mode) continue;
        if (const auto* m = world.find(l.source)) take(*m);
    }
    return out;
}

} // namespace

std::set<IdPair> eval_comparative(const InstanceWorld& world, const Model& model, std::string_view relation) {
    const auto& rel = model.relation(relation);
    std::set<IdPair> out;

    if (rel.kind == RelationKind::Internal) {
        if (rel.source != rel.target || model.classifier(rel.source).stereotype != Stereotype::Quality)
            throw OntoError(ErrorCode::NotComparative,
                            "internal relation '" + rel.name + "' does not relate the values of one quality");
        ordered_space(model, rel.source, rel.name);
        std::set<std::int64_t> present;
        for (const auto& q : world.qualityValues)
            if (q.quality == rel.source) present.insert(q.value);
        for (auto a : present)
            for (auto b : present)
                if (a > b) out.emplace(rel.source + "=" + std::to_string(a), rel.source + "=" + std::to_string(b));
        return out;
    }
    if (rel.kind != RelationKind::Comparative || !rel.via)
        throw OntoError(ErrorCode::NotComparative, "'" + rel.name + "' is not a comparative relation");

    const auto& quality = rel.via->quality;
    ordered_space(model, quality, rel.name);
    std::map<std::string, std::vector<std::int64_t>> values;
    for (const auto& ind : world.individuals) {
        bool end = std::binary_search(ind.types.begin(), ind.types.end(), rel.source) ||
                   std::binary_search(ind.types.begin(), ind.types.end(), rel.target);
        if (end) values[ind.id] = compared_values(model, world, quality, ind);
    }
    for (const auto& x : world.individuals) {
        if (!std::binary_search(x.types.begin(), x.types.end(), rel.source)) continue;
        const auto& vx = values[x.id];
        if (vx.empty()) continue;
        for (const auto& y : world.individuals) {
            if (!std::binary_search(y.types.begin(), y.types.end(), rel.target)) continue;
            const auto& vy = values[y.id];
            if (vy.empty()) continue;
            bool holds = std::any_of(vx.begin(), vx.end(), [&](std::int64_t v) {
                return std::all_of(vy.begin(), vy.end(), [&](std::int64_t w) { return beats(rel.via->direction, v, w); });
            });
            if (holds) out.emplace(x.id, y.id);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Meta-properties

namespace {

struct Failure {
    WorldKey key;
    Counterexample example;
};

struct Findings {
    std::optional<Failure> irreflexive, asymmetric, transitive;
    std::size_t worlds = 0;
};

void record(std::optional<Failure>& slot, const WorldKey& key, const InstanceWorld& w, std::vector<std::string> inds) {
    if (slot && !(key < slot->key)) return;
    slot = Failure{key, Counterexample{w, std::move(inds)}};
}

void inspect(const std::set<IdPair>& pairs, const WorldKey& key, const InstanceWorld& w, Findings& f) {
    for (const auto& [a, b] : pairs) {
        if (a == b) {
            record(f.irreflexive, key, w, {a});
            break;
        }
    }
    for (const auto& [a, b] : pairs) {
        if (a != b && pairs.count({b, a})) {
            record(f.asymmetric, key, w, {a, b});
            break;
        }
    }
    bool found = false;
    for (const auto& [a, b] : pairs) {
        for (auto it = pairs.lower_bound({b, std::string()}); it != pairs.end() && it->first == b; ++it) {
            if (!pairs.count({a, it->second})) {
                record(f.transitive, key, w, {a, b, it->second});
                found = true;
                break;
            }
        }
        if (found) break;
    }
}

void merge(std::optional<Failure>& into, std::optional<Failure>& from) {
    if (from && (!into || from->key < into->key)) into = std::move(from);
}

} // namespace

MetaPropertyReport check_metaproperties(const Model& model, std::string_view relation, const Scope& scope,
                                        const FinderOptions& options) {
    const auto& rel = model.relation(relation);
    if (rel.kind != RelationKind::Comparative && rel.kind != RelationKind::Internal)
        throw OntoError(ErrorCode::NotComparative, "'" + rel.name + "' is neither comparative nor internal");

    WorldSearch search(model, scope, options);
    std::vector<Findings> perBranch(search.branch_count());
    std::atomic<std::uint64_t> nodes{0};
    for_branches(search, options, [&](std::size_t b) {
        auto& f = perBranch[b];
        search.run_branch(
            b,
            [&](const WorldKey& key, InstanceWorld&& w) {
                ++f.worlds;
                inspect(eval_comparative(w, model, relation), key, w, f);
            },
            nodes);
    });

    Findings all;
    for (auto& f : perBranch) {
        all.worlds += f.worlds;
        merge(all.irreflexive, f.irreflexive);
        merge(all.asymmetric, f.asymmetric);
        merge(all.transitive, f.transitive);
    }
    MetaPropertyReport report;
    report.worldsChecked = all.worlds;
    report.irreflexive = !all.irreflexive;
    report.asymmetric = !all.asymmetric;
    report.transitive = !all.transitive;
    if (all.irreflexive) report.irreflexiveCounterexample = std::move(all.irreflexive->example);
    if (all.asymmetric) report.asymmetricCounterexample = std::move(all.asymmetric->example);
    if (all.transitive) report.transitiveCounterexample = std::move(all.transitive->example);
    return report;
}

std::string metaproperties_to_json(const Model& model, std::string_view relation, const MetaPropertyReport& report) {
    using nlohmann::json;
    auto property = [&](bool holds, const std::optional<Counterexample>& ce) {
        json j{{"holds", holds}};
        if (ce)
            j["counterexample"] = json{{"individuals", ce->individuals},
                                       {"world", json::parse(world_to_json(model, ce->world, -1))}};
        return j;
    };
    json j{{"relation", std::string(relation)},
           {"worldsChecked", report.worldsChecked},
           {"irreflexive", property(report.irreflexive, report.irreflexiveCounterexample)},
           {"asymmetric", property(report.asymmetric, report.asymmetricCounterexample)},
           {"transitive", property(report.transitive, report.transitiveCounterexample)}};
    return j.dump(2) + "\n";
}

} // namespace ontokit
