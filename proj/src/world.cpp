#include "ontokit/world.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ontokit/finder.hpp"
#include "ontokit/rules.hpp"

namespace ontokit {

const Individual* InstanceWorld::find(std::string_view id) const {
    for (const auto& i : individuals)
        if (i.id == id) return &i;
    return nullptr;
}

bool InstanceWorld::instantiates(std::string_view id, std::string_view type) const {
    const auto* i = find(id);
    return i && std::find(i->types.begin(), i->types.end(), type) != i->types.end();
}

std::vector<std::string> InstanceWorld::members(std::string_view type) const {
    std::vector<std::string> out;
    for (const auto& i : individuals)
        if (std::find(i.types.begin(), i.types.end(), type) != i.types.end()) out.push_back(i.id);
    return out;
}

std::optional<std::int64_t> InstanceWorld::value(std::string_view quality, std::string_view bearer) const {
    for (const auto& q : qualityValues)
        if (q.quality == quality && q.bearer == bearer) return q.value;
    return std::nullopt;
}

int Scope::bound(std::string_view classifier) const {
    auto it = perClassifier.find(classifier);
    return it != perClassifier.end() ? it->second : defaultCount;
}

bool Scope::explicitly_bounded(std::string_view classifier) const { return perClassifier.count(classifier) > 0; }

// ---------------------------------------------------------------------------
// Goals

namespace {

class GoalLexer {
public:
    explicit GoalLexer(std::string_view text) : text_(text) {}

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool done() {
        skip();
        return pos_ >= text_.size();
    }
    bool accept(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    std::string ident() {
        skip();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
        }
        if (start == pos_) fail("expected identifier");
        return std::string(text_.substr(start, pos_ - start));
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw OntoError(ErrorCode::InvalidGoal, what + " at offset " + std::to_string(pos_) + " in goal '" +
                                                    std::string(text_) + "'");
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

Goal Goal::parse(std::string_view text) {
    Goal g;
    GoalLexer lex(text);
    if (lex.done()) lex.fail("empty goal");
    do {
        std::string first = lex.ident();
        if (lex.accept(':')) {
            g.types.push_back({first, lex.ident()});
        } else if (lex.accept('(')) {
            std::string a = lex.ident();
            lex.expect(',');
            std::string b = lex.ident();
            lex.expect(')');
            g.links.push_back({first, a, b});
        } else {
            lex.fail("expected ':' or '('");
        }
    } while (lex.accept(',') || lex.accept('&'));
    if (!lex.done()) lex.fail("unexpected trailing text");
    for (const auto& v : g.variables()) {
        bool typed = std::any_of(g.types.begin(), g.types.end(), [&](const TypeAtom& t) { return t.var == v; });
        if (!typed) throw OntoError(ErrorCode::InvalidGoal, "variable '" + v + "' has no typing atom");
    }
    return g;
}

std::string Goal::str() const {
    std::string out;
    for (const auto& t : types) out += (out.empty() ? "" : ", ") + t.var + ":" + t.classifier;
    for (const auto& l : links) out += (out.empty() ? "" : ", ") + l.relation + "(" + l.source + "," + l.target + ")";
    return out;
}

std::vector<std::string> Goal::variables() const {
    std::set<std::string> vars;
    for (const auto& t : types) vars.insert(t.var);
    for (const auto& l : links) {
        vars.insert(l.source);
        vars.insert(l.target);
    }
    return {vars.begin(), vars.end()};
}

void validate_goal(const Model& model, const Goal& goal) {
    if (goal.types.empty()) throw OntoError(ErrorCode::InvalidGoal, "goal has no typing atoms");
    for (const auto& t : goal.types)
        if (!model.find_classifier(t.classifier))
            throw OntoError(ErrorCode::InvalidGoal, "unknown classifier '" + t.classifier + "' in goal");
    for (const auto& l : goal.links)
        if (!model.find_relation(l.relation))
            throw OntoError(ErrorCode::InvalidGoal, "unknown relation '" + l.relation + "' in goal");
    for (const auto& v : goal.variables()) {
        bool typed = std::any_of(goal.types.begin(), goal.types.end(), [&](const TypeAtom& t) { return t.var == v; });
        if (!typed) throw OntoError(ErrorCode::InvalidGoal, "variable '" + v + "' has no typing atom");
    }
}

bool satisfies(const Model& model, const InstanceWorld& world, const Goal& goal) {
    const auto vars = goal.variables();
    std::map<std::string, std::vector<std::string>> candidates;
    for (const auto& v : vars) {
        for (const auto& ind : world.individuals) {
            bool ok = std::all_of(goal.types.begin(), goal.types.end(), [&](const TypeAtom& t) {
                return t.var != v || std::binary_search(ind.types.begin(), ind.types.end(), t.classifier);
            });
            if (ok) candidates[v].push_back(ind.id);
        }
        if (candidates[v].empty()) return false;
    }

    std::map<std::string, std::set<std::pair<std::string, std::string>>> pairs;
    for (const auto& l : goal.links) {
        if (pairs.count(l.relation)) continue;
        const auto& rel = model.relation(l.relation);
        auto& set = pairs[l.relation];
        if (rel.kind == RelationKind::Comparative || rel.kind == RelationKind::Internal) {
            set = eval_comparative(world, model, l.relation);
        } else {
            for (const auto& k : world.links)
                if (k.relation == l.relation) set.emplace(k.source, k.target);
        }
    }

    std::map<std::string, std::string> assignment;
    std::function<bool(std::size_t)> rec = [&](std::size_t i) {
        for (const auto& l : goal.links) {
            auto s = assignment.find(l.source);
            auto t = assignment.find(l.target);
            if (s != assignment.end() && t != assignment.end() && !pairs[l.relation].count({s->second, t->second}))
                return false;
        }
        if (i == vars.size()) return true;
        for (const auto& id : candidates[vars[i]]) {
            assignment[vars[i]] = id;
            if (rec(i + 1)) return true;
        }
        assignment.erase(vars[i]);
        return false;
    };
    return rec(0);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

nlohmann::json value_json(const Model& model, const QualityValue& q) {
    const auto* space = model.find_space(q.quality);
    if (space && !space->ordered() && q.value >= 0 && q.value < static_cast<std::int64_t>(space->labels.size()))
        return space->labels[q.value];
    return q.value;
}

std::string value_text(const Model& model, const QualityValue& q) {
    auto j = value_json(model, q);
    return j.is_string() ? j.get<std::string>() : j.dump();
}

nlohmann::json world_json(const Model& model, const InstanceWorld& world) {
    using nlohmann::json;
    json inds = json::array();
    for (const auto& i : world.individuals) inds.push_back({{"id", i.id}, {"kind", i.kind}, {"types", i.types}});
    json links = json::array();
    for (const auto& l : world.links) links.push_back({{"relation", l.relation}, {"source", l.source}, {"target", l.target}});
    json values = json::array();
    for (const auto& q : world.qualityValues)
        values.push_back({{"quality", q.quality}, {"bearer", q.bearer}, {"value", value_json(model, q)}});
    json derived = json::array();
    for (const auto& r : model.relations()) {
        if (r.kind != RelationKind::Comparative) continue;
        try {
            for (const auto& [a, b] : eval_comparative(world, model, r.name))
                derived.push_back({{"relation", r.name}, {"source", a}, {"target", b}});
        } catch (const OntoError&) {
            // ungrounded or missing values: nothing to show
        }
    }
    return json{{"individuals", inds}, {"links", links}, {"qualityValues", values}, {"comparisons", derived}};
}

std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string world_to_json(const Model& model, const InstanceWorld& world, int indent) {
    auto j = world_json(model, world);
    return indent < 0 ? j.dump() : j.dump(indent) + "\n";
}

std::string worlds_to_json(const Model& model, const std::vector<InstanceWorld>& worlds, bool exhaustive) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& w : worlds) arr.push_back(world_json(model, w));
    nlohmann::json j{{"model", model.name()}, {"count", worlds.size()}, {"exhaustive", exhaustive}, {"worlds", arr}};
    return j.dump(2) + "\n";
}

std::string world_to_dot(const Model& model, const InstanceWorld& world, std::string_view graphName) {
    std::ostringstream out;
    out << "// node shapes: box = object, diamond = relator, hexagon = event, ellipse = mode\n";
    out << "// edge styles: solid = mediation/participation/characterization, dashed = derived material\n";
    out << "digraph " << dot_quote(graphName) << " {\n";
    out << "  node [fontname=\"Helvetica\", fontsize=10];\n";
    out << "  edge [fontname=\"Helvetica\", fontsize=9];\n";
    for (const auto& i : world.individuals) {
        std::string shape = "box";
        if (const auto* c = model.find_classifier(i.kind)) {
            if (c->stereotype == Stereotype::Relator) shape = "diamond";
            else if (c->stereotype == Stereotype::Event) shape = "hexagon";
            else if (c->stereotype == Stereotype::Mode) shape = "ellipse";
        }
        std::string label = i.id + "\\n";
        for (std::size_t k = 0; k < i.types.size(); ++k) label += (k ? ", " : "") + i.types[k];
        for (const auto& q : world.qualityValues)
            if (q.bearer == i.id) label += "\\n" + q.quality + " = " + value_text(model, q);
        out << "  " << dot_quote(i.id) << " [shape=" << shape << ", label=\"" << label << "\"];\n";
    }
    for (const auto& l : world.links) {
        const auto* r = model.find_relation(l.relation);
        bool material = r && r->kind == RelationKind::Material;
        out << "  " << dot_quote(l.source) << " -> " << dot_quote(l.target) << " [label=" << dot_quote(l.relation)
            << (material ? ", style=dashed" : "") << "];\n";
    }
    out << "}\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Validation

std::vector<std::string> validate_world(const Model& model, const InstanceWorld& world) {
    std::vector<std::string> v;
    auto has = [](const Individual& i, std::string_view t) {
        return std::find(i.types.begin(), i.types.end(), t) != i.types.end();
    };

    std::set<std::string> ids;
    for (const auto& i : world.individuals) {
        if (!ids.insert(i.id).second) v.push_back("duplicate individual " + i.id);
        const auto* root = model.find_classifier(i.kind);
        if (!root) {
            v.push_back(i.id + ": unknown kind " + i.kind);
            continue;
        }
        bool dependent = root->stereotype == Stereotype::Relator || root->stereotype == Stereotype::Event ||
                         root->stereotype == Stereotype::Mode;
        if (root->stereotype != Stereotype::Kind && !dependent) v.push_back(i.id + ": " + i.kind + " is not an identity provider");
        if (!std::is_sorted(i.types.begin(), i.types.end()) ||
            std::adjacent_find(i.types.begin(), i.types.end()) != i.types.end())
            v.push_back(i.id + ": types not sorted and unique");
        if (!has(i, i.kind)) v.push_back(i.id + ": does not instantiate its kind");
        int kinds = 0;
        for (const auto& t : i.types) {
            const auto* c = model.find_classifier(t);
            if (!c) {
                v.push_back(i.id + ": unknown type " + t);
                continue;
            }
            if (c->stereotype == Stereotype::Kind) ++kinds;
            if (c->stereotype == Stereotype::Quality) v.push_back(i.id + ": qualities are values, not individuals");
            for (const auto& a : model.ancestors(t))
                if (!has(i, a)) v.push_back(i.id + ": instantiates " + t + " but not its ancestor " + a);
            if (is_sortal(c->stereotype)) {
                auto ks = kind_ancestors(model, t);
                if (ks.size() != 1 || ks.front() != i.kind) v.push_back(i.id + ": " + t + " is not a sortal of " + i.kind);
            } else if (is_non_sortal(c->stereotype)) {
                bool derived = std::any_of(i.types.begin(), i.types.end(), [&](const std::string& u) {
                    const auto* uc = model.find_classifier(u);
                    return uc && !is_non_sortal(uc->stereotype) && model.specializes(u, t);
                });
                if (!derived) v.push_back(i.id + ": instantiates non-sortal " + t + " without a specializing type");
            } else if (t != i.kind) {
                v.push_back(i.id + ": instantiates a second identity provider " + t);
            }
            if (c->isAbstract) {
                bool refined = std::any_of(i.types.begin(), i.types.end(), [&](const std::string& u) {
                    return model.find_classifier(u) && model.specializes(u, t);
                });
                if (!refined) v.push_back(i.id + ": instantiates abstract " + t + " directly");
            }
        }
        if (!dependent && kinds != 1) v.push_back(i.id + ": instantiates " + std::to_string(kinds) + " kinds");
        if (dependent && kinds != 0) v.push_back(i.id + ": dependent individual instantiates a kind");
        for (const auto& g : model.generalizationSets()) {
            if (!has(i, g.general)) continue;
            auto n = std::count_if(g.specifics.begin(), g.specifics.end(), [&](const std::string& s) { return has(i, s); });
            if (g.isDisjoint && n > 1) v.push_back(i.id + ": violates disjointness of " + g.name);
            if (g.isComplete && n < 1) v.push_back(i.id + ": violates completeness of " + g.name);
        }
    }

    std::set<Link> seen;
    for (const auto& l : world.links) {
        if (!seen.insert(l).second) v.push_back("duplicate link " + l.relation + "(" + l.source + "," + l.target + ")");
        const auto* r = model.find_relation(l.relation);
        if (!r) {
            v.push_back("link of unknown relation " + l.relation);
            continue;
        }
        if (r->kind == RelationKind::Comparative || r->kind == RelationKind::Internal)
            v.push_back("stored link of derived relation " + r->name);
        if (!world.instantiates(l.source, r->source))
            v.push_back(l.relation + ": source " + l.source + " is not a " + r->source);
        if (!world.instantiates(l.target, r->target))
            v.push_back(l.relation + ": target " + l.target + " is not a " + r->target);
    }

    // Multiplicities of stored relations between individuals.
    for (const auto& r : model.relations()) {
        if (r.kind == RelationKind::Comparative || r.kind == RelationKind::Internal) continue;
        if (model.classifier(r.source).stereotype == Stereotype::Quality) continue;
        for (const auto& x : world.members(r.source)) {
            auto n = std::count_if(world.links.begin(), world.links.end(),
                                   [&](const Link& l) { return l.relation == r.name && l.source == x; });
            if (!r.targetMult.admits(n))
                v.push_back(r.name + ": " + x + " has " + std::to_string(n) + " targets, expected " + r.targetMult.str());
        }
        for (const auto& y : world.members(r.target)) {
            auto n = std::count_if(world.links.begin(), world.links.end(),
                                   [&](const Link& l) { return l.relation == r.name && l.target == y; });
            if (!r.sourceMult.admits(n))
                v.push_back(r.name + ": " + y + " has " + std::to_string(n) + " sources, expected " + r.sourceMult.str());
        }
    }

    // Roles hold exactly when a dependent individual ties the player to them.
    for (const auto& i : world.individuals) {
        for (const auto& t : i.types) {
            const auto* c = model.find_classifier(t);
            if (!c || (c->stereotype != Stereotype::Role && c->stereotype != Stereotype::HistoricalRole)) continue;
            bool justified = std::any_of(world.links.begin(), world.links.end(), [&](const Link& l) {
                if (l.target != i.id) return false;
                const auto* r = model.find_relation(l.relation);
                if (!r || (r->kind != RelationKind::Mediation && r->kind != RelationKind::Participation)) return false;
                return is_relational_role(model.classifier(r->target).stereotype) &&
                       (r->target == t || model.specializes(t, r->target));
            });
            if (!justified) v.push_back(i.id + ": role " + t + " is not justified by any mediation or participation");
        }
    }

    // Material links are exactly the tuples derived from relators.
    for (const auto& r : model.relations()) {
        if (r.kind != RelationKind::Material) continue;
        auto meds = derivation_mediations(model, r);
        if (!meds) continue;
        std::map<std::pair<std::string, std::string>, std::int64_t> derived;
        for (const auto& rel : world.members(r.derivedFrom->relator)) {
            for (const auto& a : world.links) {
                if (a.relation != meds->first || a.source != rel || !world.instantiates(a.target, r.source)) continue;
                for (const auto& b : world.links) {
                    if (b.relation != meds->second || b.source != rel || !world.instantiates(b.target, r.target)) continue;
                    if (meds->first == meds->second && a.target == b.target) continue;
                    ++derived[{a.target, b.target}];
                }
            }
        }
        std::set<std::pair<std::string, std::string>> stored;
        for (const auto& l : world.links)
            if (l.relation == r.name) stored.emplace(l.source, l.target);
        for (const auto& [xy, n] : derived) {
            if (!stored.count(xy)) v.push_back(r.name + ": derived tuple (" + xy.first + "," + xy.second + ") missing");
            if (!r.derivedFrom->mult.admits(n))
                v.push_back(r.name + ": tuple (" + xy.first + "," + xy.second + ") derived from " + std::to_string(n) +
                            " relators, expected " + r.derivedFrom->mult.str());
        }
        for (const auto& xy : stored)
            if (!derived.count(xy)) v.push_back(r.name + ": tuple (" + xy.first + "," + xy.second + ") has no relator");
    }

    // One value per bearer for every quality with a space.
    std::set<std::pair<std::string, std::string>> valued;
    for (const auto& q : world.qualityValues) {
        if (!valued.insert({q.quality, q.bearer}).second) v.push_back(q.bearer + ": several values of " + q.quality);
        const auto* space = model.find_space(q.quality);
        if (!space) {
            v.push_back(q.quality + " has no space but a value");
            continue;
        }
        auto lo = space->ordered() ? space->lo : 0;
        auto hi = space->ordered() ? space->hi : static_cast<std::int64_t>(space->labels.size()) - 1;
        if (q.value < lo || q.value > hi) v.push_back(q.bearer + ": value of " + q.quality + " outside its space");
    }
    for (const auto& space : model.spaces()) {
        std::set<std::string> bearers;
        for (const auto& r : model.relations())
            if (r.kind == RelationKind::Characterization && r.source == space.owner)
                for (const auto& b : world.members(r.target)) bearers.insert(b);
        for (const auto& b : bearers)
            if (!valued.count({space.owner, b})) v.push_back(b + ": missing value of " + space.owner);
        for (const auto& q : world.qualityValues)
            if (q.quality == space.owner && !bearers.count(q.bearer))
                v.push_back(q.bearer + ": bears " + q.quality + " without being characterized by it");
    }
    return v;
}

} // namespace ontokit
