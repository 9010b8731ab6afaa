#include "ontokit/frontend.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include <json.hpp>

#include "json_io.hpp"

namespace ontokit {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Ident, Int, Colon, Comma, LBracket, RBracket, LBrace, RBrace, DotDot, DashDash, Star, Invalid, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourceSpan span;
};

std::string describe(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Colon: return "':'";
    case Tok::Comma: return "','";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::DotDot: return "'..'";
    case Tok::DashDash: return "'--'";
    case Tok::Star: return "'*'";
    case Tok::Invalid: return "invalid character";
    case Tok::End: return "end of input";
    }
    return "?";
}

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto push = [&](Tok k, std::size_t start, std::size_t len, int l, int c) {
        out.push_back({k, std::string(src.substr(start, len)), {l, c, static_cast<int>(len)}});
    };
    while (i < src.size()) {
        char ch = src[i];
        if (ch == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (ch == ' ' || ch == '\t' || ch == '\r') {
            ++col;
            ++i;
            continue;
        }
        if (ch == '#') {
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        std::size_t start = i;
        int l = line, c = col;
        if (is_alpha(ch)) {
            while (i < src.size() && (is_alpha(src[i]) || is_digit(src[i]) || src[i] == '_')) ++i;
            push(Tok::Ident, start, i - start, l, c);
        } else if (is_digit(ch)) {
            while (i < src.size() && is_digit(src[i])) ++i;
            push(Tok::Int, start, i - start, l, c);
        } else if (ch == '.' && i + 1 < src.size() && src[i + 1] == '.') {
            i += 2;
            push(Tok::DotDot, start, 2, l, c);
        } else if (ch == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            i += 2;
            push(Tok::DashDash, start, 2, l, c);
        } else {
            Tok k = Tok::Invalid;
            switch (ch) {
            case ':': k = Tok::Colon; break;
            case ',': k = Tok::Comma; break;
            case '[': k = Tok::LBracket; break;
            case ']': k = Tok::RBracket; break;
            case '{': k = Tok::LBrace; break;
            case '}': k = Tok::RBrace; break;
            case '*': k = Tok::Star; break;
            default: break;
            }
            ++i;
            push(k, start, 1, l, c);
        }
        col += static_cast<int>(i - start);
    }
    out.push_back({Tok::End, "", {line, col, 0}});
    return out;
}

// ---------------------------------------------------------------------------
// Parser

const std::set<std::string, std::less<>> kReserved = {
    "model",   "abstract", "genset", "space", "kind", "subkind", "phase", "role", "roleMixin", "historicalRole",
    "historicalRoleMixin", "category", "relator", "mode", "quality", "event", "material", "comparative",
    "internal", "mediation", "characterization", "participation",
};

bool starts_declaration(const Token& t) {
    if (t.kind != Tok::Ident) return false;
    return t.text == "abstract" || t.text == "genset" || t.text == "space" || parse_stereotype(t.text) ||
           parse_relation_kind(t.text);
}

struct SyntaxError {
    ParseError error;
};

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {}

    ParseResult run() {
        ModelData data;
        if (peek().kind == Tok::Ident && peek().text == "model") {
            data.span = peek().span;
            advance();
            try {
                auto name = expect_ident("model name");
                data.name = name.text;
                data.span = name.span;
            } catch (const SyntaxError& e) {
                errors_.push_back(e.error);
            }
        } else {
            errors_.push_back({peek().span, "a model must start with 'model <name>'", {"'model'"}});
        }
        while (peek().kind != Tok::End) {
            if (!starts_declaration(peek())) {
                errors_.push_back(error_here("expected a declaration", {"declaration keyword"}));
                synchronize();
                continue;
            }
            try {
                declaration(data);
            } catch (const SyntaxError& e) {
                errors_.push_back(e.error);
                synchronize();
            }
        }
        ParseResult result;
        if (!errors_.empty()) {
            result.errors = std::move(errors_);
            return result;
        }
        for (auto& se : validate_structure(data)) result.errors.push_back({se.span, se.message, {}});
        if (result.errors.empty()) result.model.emplace(std::move(data));
        return result;
    }

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& advance() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }

    ParseError error_here(std::string message, std::vector<std::string> expected) const {
        const Token& t = peek();
        if (t.kind == Tok::Invalid) message += " (invalid character '" + t.text + "')";
        else if (t.kind == Tok::End) message += " (found end of input)";
        else message += " (found '" + t.text + "')";
        return {t.span, std::move(message), std::move(expected)};
    }

    [[noreturn]] void fail(std::string message, std::vector<std::string> expected) {
        throw SyntaxError{error_here(std::move(message), std::move(expected))};
    }

    void synchronize() {
        advance();
        while (peek().kind != Tok::End && !starts_declaration(peek())) advance();
    }

    bool accept_word(std::string_view w) {
        if (peek().kind == Tok::Ident && peek().text == w) {
            advance();
            return true;
        }
        return false;
    }

    void expect_word(std::string_view w) {
        if (!accept_word(w)) fail("expected '" + std::string(w) + "'", {"'" + std::string(w) + "'"});
    }

    bool accept(Tok k) {
        if (peek().kind == k) {
            advance();
            return true;
        }
        return false;
    }

    void expect(Tok k) {
        if (!accept(k)) fail("expected " + describe(k), {describe(k)});
    }

    Token expect_ident(std::string_view what) {
        const Token& t = peek();
        if (t.kind != Tok::Ident) fail("expected " + std::string(what), {"identifier"});
        if (kReserved.count(t.text)) fail("reserved word cannot be used as " + std::string(what), {"identifier"});
        return advance();
    }

    std::int64_t expect_int() {
        const Token& t = peek();
        if (t.kind != Tok::Int) fail("expected integer", {"integer"});
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{}) fail("integer out of range", {"integer"});
        advance();
        return v;
    }

    std::vector<std::string> ident_list(std::string_view what) {
        std::vector<std::string> names{expect_ident(what).text};
        while (accept(Tok::Comma)) names.push_back(expect_ident(what).text);
        return names;
    }

    Multiplicity card() {
        SourceSpan at = peek().span;
        expect(Tok::LBracket);
        Multiplicity m;
        m.min = expect_int();
        expect(Tok::DotDot);
        if (accept(Tok::Star)) {
            m.max = Multiplicity::kUnbounded;
        } else if (peek().kind == Tok::Int) {
            m.max = expect_int();
        } else {
            fail("expected upper bound", {"integer", "'*'"});
        }
        expect(Tok::RBracket);
        if (!m.unbounded() && m.max < 1)
            throw SyntaxError{{at, "multiplicity upper bound must be positive", {}}};
        if (!m.unbounded() && m.min > m.max)
            throw SyntaxError{{at, "multiplicity lower bound exceeds upper bound", {}}};
        return m;
    }

    void declaration(ModelData& data) {
        const Token& head = peek();
        if (head.text == "genset") return genset(data);
        if (head.text == "space") return space(data);
        if (auto rk = parse_relation_kind(head.text)) {
            advance();
            return relation(data, *rk);
        }
        bool isAbstract = accept_word("abstract");
        auto st = parse_stereotype(peek().text);
        if (peek().kind != Tok::Ident || !st) fail("expected a classifier stereotype", {"stereotype"});
        advance();
        classifier(data, *st, isAbstract);
    }

    void classifier(ModelData& data, Stereotype st, bool isAbstract) {
        auto name = expect_ident("classifier name");
        Classifier c{name.text, st, {}, isAbstract, name.span};
        if (accept_word("specializes")) c.parents = ident_list("parent name");
        data.classifiers.push_back(std::move(c));
    }

    void relation(ModelData& data, RelationKind kind) {
        auto name = expect_ident("relation name");
        RelationDecl r;
        r.name = name.text;
        r.kind = kind;
        r.span = name.span;
        expect(Tok::Colon);
        r.source = expect_ident("source type").text;
        const bool comparative = kind == RelationKind::Comparative;
        if (peek().kind == Tok::LBracket) {
            if (comparative) fail("comparative relations carry no multiplicity", {"'--'"});
            r.sourceMult = card();
        } else if (!comparative) {
            fail("expected multiplicity", {"'['"});
        }
        expect(Tok::DashDash);
        if (peek().kind == Tok::LBracket) {
            if (comparative) fail("comparative relations carry no multiplicity", {"identifier"});
            r.targetMult = card();
        } else if (!comparative) {
            fail("expected multiplicity", {"'['"});
        }
        r.target = expect_ident("target type").text;
        if (accept_word("derivedFrom")) {
            auto relator = expect_ident("relator name").text;
            r.derivedFrom = Derivation{relator, card()};
        }
        if (accept_word("via")) {
            auto quality = expect_ident("quality name").text;
            auto dir = peek().kind == Tok::Ident ? parse_direction(peek().text) : std::nullopt;
            if (!dir) fail("expected ordering direction", {"'asc'", "'desc'", "'ascOrEqual'", "'descOrEqual'"});
            advance();
            r.via = QualityRef{quality, *dir};
        }
        data.relations.push_back(std::move(r));
    }

    void genset(ModelData& data) {
        advance();
        auto name = expect_ident("generalization set name");
        GeneralizationSet g;
        g.name = name.text;
        g.span = name.span;
        g.isDisjoint = accept_word("disjoint");
        g.isComplete = accept_word("complete");
        expect_word("general");
        g.general = expect_ident("general name").text;
        expect_word("specifics");
        g.specifics = ident_list("specific name");
        data.generalizationSets.push_back(std::move(g));
    }

    void space(ModelData& data) {
        advance();
        auto owner = expect_ident("quality name");
        QualitySpace sp;
        sp.owner = owner.text;
        sp.span = owner.span;
        if (accept_word("ordered")) {
            sp.kind = QualitySpace::Kind::OrderedInteger;
            sp.lo = expect_int();
            expect(Tok::DotDot);
            sp.hi = expect_int();
        } else if (accept_word("nominal")) {
            sp.kind = QualitySpace::Kind::Nominal;
            expect(Tok::LBrace);
            sp.labels = ident_list("label");
            expect(Tok::RBrace);
        } else {
            fail("expected space kind", {"'ordered'", "'nominal'"});
        }
        data.spaces.push_back(std::move(sp));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<ParseError> errors_;
};

// ---------------------------------------------------------------------------
// JSON

using nlohmann::json;

using detail::span_json;

template <class T>
std::vector<const T*> sorted_by(const std::vector<T>& items, auto key) {
    std::vector<const T*> out;
    for (const auto& i : items) out.push_back(&i);
    std::sort(out.begin(), out.end(), [&](const T* a, const T* b) { return key(*a) < key(*b); });
    return out;
}

struct JsonSchemaError {
    std::string message;
};

class JsonReader {
public:
    const json& field(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.is_object()) throw JsonSchemaError{"expected object at " + path};
        auto it = obj.find(key);
        if (it == obj.end()) throw JsonSchemaError{"missing field: " + key + " (at " + path + ")"};
        return *it;
    }
    std::string str(const json& obj, const std::string& key, const std::string& path) {
        const auto& v = field(obj, key, path);
        if (!v.is_string()) throw JsonSchemaError{"expected string at " + path + "." + key};
        return v.get<std::string>();
    }
    bool boolean(const json& obj, const std::string& key, const std::string& path) {
        const auto& v = field(obj, key, path);
        if (!v.is_boolean()) throw JsonSchemaError{"expected boolean at " + path + "." + key};
        return v.get<bool>();
    }
    std::int64_t integer(const json& obj, const std::string& key, const std::string& path) {
        const auto& v = field(obj, key, path);
        if (!v.is_number_integer()) throw JsonSchemaError{"expected integer at " + path + "." + key};
        return v.get<std::int64_t>();
    }
    const json& array(const json& obj, const std::string& key, const std::string& path) {
        const auto& v = field(obj, key, path);
        if (!v.is_array()) throw JsonSchemaError{"expected array at " + path + "." + key};
        return v;
    }
    std::vector<std::string> strings(const json& obj, const std::string& key, const std::string& path) {
        std::vector<std::string> out;
        const auto& arr = array(obj, key, path);
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_string())
                throw JsonSchemaError{"expected string at " + path + "." + key + "[" + std::to_string(i) + "]"};
            out.push_back(arr[i].get<std::string>());
        }
        return out;
    }
    SourceSpan span(const json& obj, const std::string& path) {
        const auto& s = field(obj, "span", path);
        std::string p = path + ".span";
        SourceSpan out{static_cast<int>(integer(s, "line", p)), static_cast<int>(integer(s, "col", p)),
                       static_cast<int>(integer(s, "len", p))};
        if (out.line < 1 || out.column < 1 || out.length < 0) throw JsonSchemaError{"invalid span at " + p};
        return out;
    }
    Multiplicity mult(const json& obj, const std::string& key, const std::string& path) {
        auto text = str(obj, key, path);
        auto m = Multiplicity::parse(text);
        if (!m) throw JsonSchemaError{"invalid multiplicity '" + text + "' at " + path + "." + key};
        return *m;
    }
};

ModelData read_model(const json& root) {
    JsonReader rd;
    ModelData data;
    data.name = rd.str(root, "name", "$");
    data.span = rd.span(root, "$");

    const auto& cls = rd.array(root, "classifiers", "$");
    for (std::size_t i = 0; i < cls.size(); ++i) {
        std::string p = "$.classifiers[" + std::to_string(i) + "]";
        Classifier c;
        c.name = rd.str(cls[i], "name", p);
        auto st = rd.str(cls[i], "stereotype", p);
        auto parsed = parse_stereotype(st);
        if (!parsed) throw JsonSchemaError{"unknown stereotype '" + st + "' at " + p + ".stereotype"};
        c.stereotype = *parsed;
        c.parents = rd.strings(cls[i], "parents", p);
        c.isAbstract = rd.boolean(cls[i], "abstract", p);
        c.span = rd.span(cls[i], p);
        data.classifiers.push_back(std::move(c));
    }

    const auto& rels = rd.array(root, "relations", "$");
    for (std::size_t i = 0; i < rels.size(); ++i) {
        std::string p = "$.relations[" + std::to_string(i) + "]";
        const auto& j = rels[i];
        RelationDecl r;
        r.name = rd.str(j, "name", p);
        auto st = rd.str(j, "stereotype", p);
        auto kind = parse_relation_kind(st);
        if (!kind) throw JsonSchemaError{"unknown relation stereotype '" + st + "' at " + p + ".stereotype"};
        r.kind = *kind;
        r.source = rd.str(j, "source", p);
        r.target = rd.str(j, "target", p);
        if (r.kind != RelationKind::Comparative) {
            r.sourceMult = rd.mult(j, "sourceMult", p);
            r.targetMult = rd.mult(j, "targetMult", p);
        }
        if (j.contains("derivedFrom")) {
            const auto& d = j.at("derivedFrom");
            r.derivedFrom = Derivation{rd.str(d, "relator", p + ".derivedFrom"), rd.mult(d, "mult", p + ".derivedFrom")};
        }
        if (j.contains("via")) {
            const auto& v = j.at("via");
            auto dirText = rd.str(v, "direction", p + ".via");
            auto dir = parse_direction(dirText);
            if (!dir) throw JsonSchemaError{"unknown direction '" + dirText + "' at " + p + ".via.direction"};
            r.via = QualityRef{rd.str(v, "quality", p + ".via"), *dir};
        }
        r.span = rd.span(j, p);
        data.relations.push_back(std::move(r));
    }

    const auto& sets = rd.array(root, "generalizationSets", "$");
    for (std::size_t i = 0; i < sets.size(); ++i) {
        std::string p = "$.generalizationSets[" + std::to_string(i) + "]";
        GeneralizationSet g;
        g.name = rd.str(sets[i], "name", p);
        g.general = rd.str(sets[i], "general", p);
        g.specifics = rd.strings(sets[i], "specifics", p);
        g.isDisjoint = rd.boolean(sets[i], "disjoint", p);
        g.isComplete = rd.boolean(sets[i], "complete", p);
        g.span = rd.span(sets[i], p);
        data.generalizationSets.push_back(std::move(g));
    }

    const auto& spaces = rd.array(root, "qualitySpaces", "$");
    for (std::size_t i = 0; i < spaces.size(); ++i) {
        std::string p = "$.qualitySpaces[" + std::to_string(i) + "]";
        QualitySpace sp;
        sp.owner = rd.str(spaces[i], "quality", p);
        auto kind = rd.str(spaces[i], "kind", p);
        if (kind == "ordered") {
            sp.kind = QualitySpace::Kind::OrderedInteger;
            sp.lo = rd.integer(spaces[i], "lo", p);
            sp.hi = rd.integer(spaces[i], "hi", p);
        } else if (kind == "nominal") {
            sp.kind = QualitySpace::Kind::Nominal;
            sp.labels = rd.strings(spaces[i], "labels", p);
        } else {
            throw JsonSchemaError{"unknown space kind '" + kind + "' at " + p + ".kind"};
        }
        sp.span = rd.span(spaces[i], p);
        data.spaces.push_back(std::move(sp));
    }
    return data;
}

SourceSpan offset_to_span(std::string_view text, std::size_t offset) {
    SourceSpan s{1, 1, 1};
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++s.line;
            s.column = 1;
        } else {
            ++s.column;
        }
    }
    return s;
}

auto classifier_key = [](const Classifier& c) { return std::make_pair(static_cast<int>(c.stereotype), c.name); };
auto relation_key = [](const RelationDecl& r) { return std::make_pair(static_cast<int>(r.kind), r.name); };

} // namespace

ParseResult parse_text(std::string_view source) { return Parser(source).run(); }

namespace detail {

json span_json(const SourceSpan& s) { return json{{"line", s.line}, {"col", s.column}, {"len", s.length}}; }

json classifier_json(const Classifier& c) {
    return json{{"name", c.name},
                {"stereotype", std::string(to_string(c.stereotype))},
                {"parents", c.parents},
                {"abstract", c.isAbstract},
                {"span", span_json(c.span)}};
}

json relation_json(const RelationDecl& r) {
    json j{{"name", r.name},
           {"stereotype", std::string(to_string(r.kind))},
           {"source", r.source},
           {"target", r.target},
           {"span", span_json(r.span)}};
    if (r.kind != RelationKind::Comparative) {
        j["sourceMult"] = r.sourceMult.str();
        j["targetMult"] = r.targetMult.str();
    }
    if (r.derivedFrom) j["derivedFrom"] = json{{"relator", r.derivedFrom->relator}, {"mult", r.derivedFrom->mult.str()}};
    if (r.via) j["via"] = json{{"quality", r.via->quality}, {"direction", std::string(to_string(r.via->direction))}};
    return j;
}

json genset_json(const GeneralizationSet& g) {
    return json{{"name", g.name},
                {"general", g.general},
                {"specifics", g.specifics},
                {"disjoint", g.isDisjoint},
                {"complete", g.isComplete},
                {"span", span_json(g.span)}};
}

json space_json(const QualitySpace& sp) {
    json j{{"quality", sp.owner}, {"span", span_json(sp.span)}};
    if (sp.ordered()) {
        j["kind"] = "ordered";
        j["lo"] = sp.lo;
        j["hi"] = sp.hi;
    } else {
        j["kind"] = "nominal";
        j["labels"] = sp.labels;
    }
    return j;
}

} // namespace detail

std::string emit_json(const Model& model) {
    json root = json::object();
    root["name"] = model.name();
    root["span"] = span_json(model.span());
    json cls = json::array();
    for (const auto* c : sorted_by(model.classifiers(), classifier_key)) cls.push_back(detail::classifier_json(*c));
    root["classifiers"] = std::move(cls);
    json rels = json::array();
    for (const auto* r : sorted_by(model.relations(), relation_key)) rels.push_back(detail::relation_json(*r));
    root["relations"] = std::move(rels);
    json sets = json::array();
    for (const auto& g : model.generalizationSets()) sets.push_back(detail::genset_json(g));
    root["generalizationSets"] = std::move(sets);
    json spaces = json::array();
    for (const auto& sp : model.spaces()) spaces.push_back(detail::space_json(sp));
    root["qualitySpaces"] = std::move(spaces);
    return root.dump(2) + "\n";
}

ParseResult load_json(std::string_view bytes) {
    ParseResult result;
    json root;
    try {
        root = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        result.errors.push_back({offset_to_span(bytes, e.byte > 0 ? e.byte - 1 : 0), std::string("invalid JSON: ") + e.what(), {}});
        return result;
    }
    ModelData data;
    try {
        data = read_model(root);
    } catch (const JsonSchemaError& e) {
        result.errors.push_back({SourceSpan{}, e.message, {}});
        return result;
    } catch (const json::exception& e) {
        result.errors.push_back({SourceSpan{}, std::string("invalid JSON value: ") + e.what(), {}});
        return result;
    }
    for (auto& se : validate_structure(data)) result.errors.push_back({se.span, se.message, {}});
    if (result.errors.empty()) result.model.emplace(std::move(data));
    return result;
}

std::string emit_dsl(const Model& model) {
    std::ostringstream out;
    out << "model " << model.name() << "\n\n";
    for (const auto* c : sorted_by(model.classifiers(), classifier_key)) {
        if (c->isAbstract) out << "abstract ";
        out << to_string(c->stereotype) << ' ' << c->name;
        for (std::size_t i = 0; i < c->parents.size(); ++i) out << (i == 0 ? " specializes " : ", ") << c->parents[i];
        out << '\n';
    }
    if (!model.spaces().empty()) out << '\n';
    for (const auto& sp : model.spaces()) {
        out << "space " << sp.owner;
        if (sp.ordered()) {
            out << " ordered " << sp.lo << ".." << sp.hi;
        } else {
            out << " nominal {";
            for (std::size_t i = 0; i < sp.labels.size(); ++i) out << (i ? ", " : "") << sp.labels[i];
            out << '}';
        }
        out << '\n';
    }
    if (!model.generalizationSets().empty()) out << '\n';
    for (const auto& g : model.generalizationSets()) {
        out << "genset " << g.name << (g.isDisjoint ? " disjoint" : "") << (g.isComplete ? " complete" : "")
            << " general " << g.general << " specifics ";
        for (std::size_t i = 0; i < g.specifics.size(); ++i) out << (i ? ", " : "") << g.specifics[i];
        out << '\n';
    }
    if (!model.relations().empty()) out << '\n';
    for (const auto* r : sorted_by(model.relations(), relation_key)) {
        out << to_string(r->kind) << ' ' << r->name << " : " << r->source;
        if (r->kind == RelationKind::Comparative)
            out << " -- ";
        else
            out << " [" << r->sourceMult.str() << "] -- [" << r->targetMult.str() << "] ";
        out << r->target;
        if (r->derivedFrom) out << " derivedFrom " << r->derivedFrom->relator << " [" << r->derivedFrom->mult.str() << ']';
        if (r->via) out << " via " << r->via->quality << ' ' << to_string(r->via->direction);
        out << '\n';
    }
    return out.str();
}

} // namespace ontokit
