#pragma once

// Backtracking enumeration of snapshot worlds, split into independent
// branches (one per multiset of base individuals) so callers can run the
// branches serially or across OpenMP threads.

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ontokit/finder.hpp"
#include "ontokit/model.hpp"
#include "ontokit/world.hpp"

namespace ontokit::detail {

// Lexicographic order on keys is the canonical world order.
using WorldKey = std::vector<int>;
using WorldSink = std::function<void(const WorldKey&, InstanceWorld&&)>;

class WorldSearch {
public:
    WorldSearch(const Model& model, const Scope& scope, const FinderOptions& options);

    std::size_t branch_count() const { return branches_.size(); }

    // Emits every canonical world of branch `b`. `nodes` accumulates search
    // nodes across all branches; ScopeTooLarge is thrown past the budget.
    void run_branch(std::size_t b, const WorldSink& sink, std::atomic<std::uint64_t>& nodes) const;

    struct QualityInfo {
        std::string name;
        const QualitySpace* space = nullptr;
        std::vector<std::int64_t> domain;
        std::vector<std::string> bearerTypes;
    };

    struct Profile {
        std::vector<std::string> types;     // sorted
        std::vector<char> member;           // by classifier index
        std::vector<int> rolesToJustify;    // classifier indices
        std::vector<std::pair<int, std::int64_t>> values; // (quality index, value)
    };

    struct BaseRoot {
        std::string name;
        int bound = 0;
        std::vector<Profile> profiles;
    };

    struct DefiningRel {
        std::string name;
        int targetClass = -1;
        Multiplicity perDependent; // targetMult
        Multiplicity perTarget;    // sourceMult
    };

    struct DependentRoot {
        std::string name;
        int bound = 0;
        bool instantiable = true;
        std::vector<std::string> types;
        std::vector<char> member;
        std::vector<int> qualities;
        std::vector<DefiningRel> rels;
    };

    struct MaterialInfo {
        std::string name;
        int sourceClass = -1;
        int targetClass = -1;
        int dependent = -1;
        int relA = -1;
        int relB = -1;
        Multiplicity sourceMult;
        Multiplicity targetMult;
        Multiplicity derivation;
    };

    struct RoleJustification {
        std::vector<std::pair<int, int>> rels; // (dependent root, rel index)
    };

    struct CountBound {
        int classIndex = -1;
        int bound = 0;
    };

    const Model& model() const { return model_; }

private:
    struct Branch;

    int class_index(std::string_view name) const;
    void build_qualities(const Scope& scope);
    void build_base_roots(const Scope& scope);
    void build_dependent_roots(const Scope& scope);
    void build_materials();
    void build_branches();
    bool typeset_valid(const std::vector<std::string>& types) const;
    std::vector<std::vector<std::pair<int, std::int64_t>>> value_tuples(const std::vector<std::string>& types) const;

    const Model& model_;
    FinderOptions options_;
    std::vector<std::string> classNames_;
    std::vector<QualityInfo> qualities_;
    std::vector<BaseRoot> baseRoots_;
    std::vector<DependentRoot> depRoots_;
    std::vector<MaterialInfo> materials_;
    std::vector<RoleJustification> justification_; // by classifier index
    std::vector<CountBound> countBounds_;
    std::vector<std::vector<std::vector<int>>> branches_; // per branch, per base root: profile multiset
};

} // namespace ontokit::detail
