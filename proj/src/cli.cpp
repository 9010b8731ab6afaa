#include "ontokit/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ontokit/finder.hpp"
#include "ontokit/frontend.hpp"
#include "ontokit/interop.hpp"
#include "ontokit/lint.hpp"
#include "ontokit/rules.hpp"
#include "ontokit/unpack.hpp"

namespace ontokit {

namespace {

struct UsageError {
    std::string message;
};

struct ModelLoadError {
    std::string message;
};

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::string trim(std::string s) {
    auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

int to_int(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        int v = std::stoi(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError{"invalid integer '" + text + "' in " + what};
}

struct ScopeFlags {
    std::string perClassifier;
    int defaultCount = 2;
    std::vector<std::string> qualityValues;
    int limit = 100;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--scope", perClassifier, "Per-classifier bounds: Name=INT{,Name=INT}");
        cmd->add_option("--scope-default", defaultCount, "Bound for classifiers not named in --scope")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--quality-values", qualityValues, "Value subset of a quality: Name={v1,v2,...}");
        cmd->add_option("--limit", limit, "Maximum number of worlds to report")->check(CLI::PositiveNumber);
    }

    Scope build() const {
        Scope s;
        s.defaultCount = defaultCount;
        s.worldLimit = static_cast<std::size_t>(limit);
        if (!trim(perClassifier).empty()) {
            for (const auto& part : split(perClassifier, ',')) {
                auto kv = split(part, '=');
                if (kv.size() != 2 || trim(kv[0]).empty()) throw UsageError{"invalid --scope entry '" + part + "'"};
                int n = to_int(trim(kv[1]), "--scope");
                if (n < 0) throw UsageError{"negative bound in --scope entry '" + part + "'"};
                s.perClassifier[trim(kv[0])] = n;
            }
        }
        for (const auto& q : qualityValues) {
            auto eq = q.find('=');
            if (eq == std::string::npos) throw UsageError{"invalid --quality-values '" + q + "'"};
            auto name = trim(q.substr(0, eq));
            auto body = trim(q.substr(eq + 1));
            if (body.size() < 2 || body.front() != '{' || body.back() != '}')
                throw UsageError{"expected Name={v1,...} in --quality-values '" + q + "'"};
            std::vector<std::string> values;
            for (const auto& v : split(body.substr(1, body.size() - 2), ','))
                if (!trim(v).empty()) values.push_back(trim(v));
            s.qualityValues[name] = values;
        }
        return s;
    }
};

Model load_model(const std::string& path, std::ostream& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelLoadError{"cannot read '" + path + "'"};
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    bool isJson = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    auto result = isJson ? load_json(text) : parse_text(text);
    if (!result.ok()) {
        for (const auto& e : result.errors) {
            err << path << ':' << e.span.line << ':' << e.span.column << ": error: " << e.message;
            if (!e.expected.empty()) {
                err << " (expected ";
                for (std::size_t i = 0; i < e.expected.size(); ++i) err << (i ? ", " : "") << e.expected[i];
                err << ')';
            }
            err << '\n';
        }
        throw ModelLoadError{"'" + path + "' has " + std::to_string(result.errors.size()) + " error(s)"};
    }
    return std::move(*result.model);
}

std::string sibling_dot_path(const std::string& input, std::size_t index) {
    auto base = input;
    auto slash = base.find_last_of('/');
    auto dot = base.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) base.erase(dot);
    return base + ".witness" + std::to_string(index) + ".dot";
}

void require_format(const std::string& format, std::initializer_list<std::string_view> allowed, const char* cmd) {
    if (std::find(allowed.begin(), allowed.end(), format) == allowed.end())
        throw UsageError{"format '" + format + "' is not available for " + cmd};
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ontological analysis of OntoUML-style conceptual models", "ontokit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "ontokit 1.0.0");

    std::string format = "json";
    std::string outputPath;
    std::string input;
    auto common = [&](CLI::App* cmd, bool takesInput = true) {
        if (takesInput) cmd->add_option("file", input, "Model file (.onto or .json)")->required();
        cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "dot", "text"}));
        cmd->add_option("-o,--output", outputPath, "Write output to a file instead of standard output");
    };

    auto* parseCmd = app.add_subcommand("parse", "Parse a model and print its canonical form");
    common(parseCmd);

    auto* checkCmd = app.add_subcommand("check", "Run the well-formedness rules");
    common(checkCmd);

    auto* unpackCmd = app.add_subcommand("unpack", "Rewrite a relation with the relator or comparative pattern");
    common(unpackCmd);
    std::string relation, relatorName, roles, qualityName, spaceText, directionText = "desc";
    bool tighten = false;
    unpackCmd->add_option("--relation", relation, "Relation to unpack")->required();
    unpackCmd->add_option("--relator", relatorName, "Relator to introduce (relator pattern)");
    unpackCmd->add_option("--roles", roles, "Role names for the two ends: A,B (relator pattern)");
    unpackCmd->add_flag("--tighten", tighten, "Tighten material multiplicities to the derived bounds");
    unpackCmd->add_option("--quality", qualityName, "Grounding quality (comparative pattern)");
    unpackCmd->add_option("--space", spaceText, "Quality space: LO..HI or {a,b,...}");
    unpackCmd->add_option("--direction", directionText, "asc, desc, ascOrEqual or descOrEqual");

    auto* cardsCmd = app.add_subcommand("derive-cards", "Derive material cardinalities from a binary relator");
    common(cardsCmd);
    std::string relator;
    cardsCmd->add_option("--relator", relator, "Relator")->required();

    ScopeFlags scopeFlags;
    auto* simCmd = app.add_subcommand("simulate", "Enumerate instance worlds or search for a witness");
    common(simCmd);
    scopeFlags.add_to(simCmd);
    std::string goalText, metaRelation;
    simCmd->add_option("--goal", goalText, "Goal, e.g. \"x:Patient, t:Treatment, participatesPatient(t,x)\"");
    simCmd->add_option("--metaproperties", metaRelation, "Brute-force the meta-properties of a relation");
    bool serial = false;
    simCmd->add_flag("--serial", serial, "Use the serial reference search");

    auto* lintCmd = app.add_subcommand("lint", "Detect anti-patterns and explain them with witness worlds");
    common(lintCmd);
    scopeFlags.add_to(lintCmd);
    bool dotOut = false;
    lintCmd->add_flag("--dot-out", dotOut, "Also write each witness as a DOT file next to the input");

    auto* diffCmd = app.add_subcommand("diff", "Classify correspondences between types of two models");
    common(diffCmd, false);
    std::string rightInput;
    std::vector<std::string> pairTexts;
    diffCmd->add_option("left", input, "Left model")->required();
    diffCmd->add_option("right", rightInput, "Right model")->required();
    diffCmd->add_option("--pair", pairTexts, "Explicit pair Left=Right (repeatable)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    std::ostringstream result;
    int status = kExitOk;
    try {
        if (parseCmd->parsed()) {
            require_format(format, {"json", "text"}, "parse");
            auto model = load_model(input, err);
            result << (format == "json" ? emit_json(model) : emit_dsl(model));
        } else if (checkCmd->parsed()) {
            require_format(format, {"json", "text"}, "check");
            auto model = load_model(input, err);
            auto diags = check(model);
            result << (format == "json" ? diagnostics_to_json(&model, diags) : diagnostics_to_text(diags, input));
            if (has_errors(diags)) status = kExitDiagnostics;
        } else if (unpackCmd->parsed()) {
            require_format(format, {"json", "text"}, "unpack");
            auto model = load_model(input, err);
            UnpackPlan plan;
            if (!relatorName.empty()) {
                auto names = split(roles, ',');
                if (names.size() != 2 || trim(names[0]).empty() || trim(names[1]).empty())
                    throw UsageError{"--roles expects two names: A,B"};
                plan = unpack_material(model, relation, relatorName, {trim(names[0]), trim(names[1])});
            } else if (!qualityName.empty()) {
                auto dir = parse_direction(directionText);
                if (!dir) throw UsageError{"unknown direction '" + directionText + "'"};
                QualitySpace space;
                auto text = trim(spaceText);
                if (text.empty()) throw UsageError{"--space is required with --quality"};
                if (text.front() == '{') {
                    if (text.back() != '}') throw UsageError{"invalid --space '" + text + "'"};
                    space.kind = QualitySpace::Kind::Nominal;
                    for (const auto& l : split(text.substr(1, text.size() - 2), ','))
                        if (!trim(l).empty()) space.labels.push_back(trim(l));
                } else {
                    auto dots = text.find("..");
                    if (dots == std::string::npos) throw UsageError{"invalid --space '" + text + "'"};
                    space.lo = to_int(trim(text.substr(0, dots)), "--space");
                    space.hi = to_int(trim(text.substr(dots + 2)), "--space");
                    if (space.lo > space.hi) throw UsageError{"empty --space '" + text + "'"};
                }
                plan = unpack_comparative(model, relation, qualityName, space, *dir);
            } else {
                throw UsageError{"unpack needs --relator and --roles, or --quality and --space"};
            }
            auto rewritten = apply_plan(model, plan);
            if (tighten) {
                if (relatorName.empty()) throw UsageError{"--tighten applies to the relator pattern only"};
                rewritten = tighten_material(rewritten, relation);
            }
            if (format == "json") {
                nlohmann::json j{{"plan", nlohmann::json::parse(plan_to_json(plan))},
                                 {"model", nlohmann::json::parse(emit_json(rewritten))}};
                result << j.dump(2) << '\n';
            } else {
                result << emit_dsl(rewritten);
            }
            auto diags = check(rewritten);
            if (has_errors(diags)) {
                err << diagnostics_to_text(diags, input);
                status = kExitDiagnostics;
            }
        } else if (cardsCmd->parsed()) {
            require_format(format, {"json", "text"}, "derive-cards");
            auto model = load_model(input, err);
            auto c = derive_material_cardinalities(model, relator);
            if (format == "json") {
                result << cardinalities_to_json(relator, c);
            } else {
                result << relator << ": " << c.typeA << " [" << c.endA.str() << "] -- [" << c.endB.str() << "] "
                       << c.typeB << ", per tuple [" << c.perTuple.str() << "]\n";
            }
        } else if (simCmd->parsed()) {
            auto model = load_model(input, err);
            auto scope = scopeFlags.build();
            FinderOptions options;
            options.parallel = !serial;
            if (!metaRelation.empty()) {
                require_format(format, {"json"}, "simulate --metaproperties");
                result << metaproperties_to_json(model, metaRelation, check_metaproperties(model, metaRelation, scope, options));
            } else if (!goalText.empty()) {
                auto goal = Goal::parse(goalText);
                auto witness = find_witness(model, scope, goal, options);
                if (format == "json") {
                    nlohmann::json j{{"goal", goal.str()}, {"satisfiable", witness.has_value()}, {"witness", nullptr}};
                    if (witness) j["witness"] = nlohmann::json::parse(world_to_json(model, *witness, -1));
                    result << j.dump(2) << '\n';
                } else if (witness) {
                    result << (format == "dot" ? world_to_dot(model, *witness, "witness") : world_to_json(model, *witness));
                } else {
                    err << "no world within scope satisfies the goal\n";
                    if (format == "text") result << "none\n";
                }
            } else {
                auto e = enumerate(model, scope, options);
                if (format == "json") {
                    auto j = nlohmann::json::parse(worlds_to_json(model, e.worlds, e.exhaustive));
                    j["total"] = e.total;
                    result << j.dump(2) << '\n';
                } else if (format == "dot") {
                    for (std::size_t i = 0; i < e.worlds.size(); ++i)
                        result << world_to_dot(model, e.worlds[i], "world_" + std::to_string(i));
                } else {
                    result << e.worlds.size() << " of " << e.total << " world(s)"
                           << (e.exhaustive ? "" : " (truncated)") << '\n';
                    for (std::size_t i = 0; i < e.worlds.size(); ++i) {
                        result << "world " << i << ":\n";
                        for (const auto& ind : e.worlds[i].individuals) {
                            result << "  " << ind.id << " :";
                            for (const auto& t : ind.types) result << ' ' << t;
                            result << '\n';
                        }
                        for (const auto& l : e.worlds[i].links)
                            result << "  " << l.relation << '(' << l.source << ", " << l.target << ")\n";
                        for (const auto& q : e.worlds[i].qualityValues)
                            result << "  " << q.quality << '(' << q.bearer << ") = " << q.value << '\n';
                    }
                }
            }
        } else if (lintCmd->parsed()) {
            auto model = load_model(input, err);
            auto diags = lint(model, scopeFlags.build());
            std::size_t index = 1;
            for (const auto& d : diags) {
                if (!d.witness) continue;
                if (format == "dot") result << world_to_dot(model, *d.witness, d.ruleId + "_witness" + std::to_string(index));
                if (dotOut) {
                    auto path = sibling_dot_path(input, index);
                    std::ofstream f(path, std::ios::binary);
                    if (!f) throw ModelLoadError{"cannot write '" + path + "'"};
                    f << world_to_dot(model, *d.witness, d.ruleId + "_witness" + std::to_string(index));
                    err << "wrote " << path << '\n';
                }
                ++index;
            }
            if (format == "json") result << diagnostics_to_json(&model, diags);
            if (format == "text") result << diagnostics_to_text(diags, input);
            if (has_errors(diags)) status = kExitDiagnostics;
        } else if (diffCmd->parsed()) {
            require_format(format, {"json", "text"}, "diff");
            auto left = load_model(input, err);
            auto right = load_model(rightInput, err);
            std::optional<std::vector<std::pair<std::string, std::string>>> pairs;
            if (!pairTexts.empty()) {
                pairs.emplace();
                for (const auto& p : pairTexts) {
                    auto kv = split(p, '=');
                    if (kv.size() != 2 || trim(kv[0]).empty() || trim(kv[1]).empty())
                        throw UsageError{"invalid --pair '" + p + "'"};
                    pairs->emplace_back(trim(kv[0]), trim(kv[1]));
                }
            }
            auto cs = compare(left, right, pairs);
            result << (format == "json" ? correspondences_to_json(left, right, cs) : correspondences_to_text(cs));
        }
    } catch (const UsageError& e) {
        err << "error: " << e.message << '\n';
        return kExitUsage;
    } catch (const ModelLoadError& e) {
        err << "error: " << e.message << '\n';
        return kExitUsage;
    } catch (const OntoError& e) {
        err << "error: " << e.what() << '\n';
        if (e.code() == ErrorCode::IllFormedModel) {
            try {
                auto model = load_model(input, err);
                err << diagnostics_to_text(check(model), input);
            } catch (...) {
            }
            return kExitDiagnostics;
        }
        return kExitUsage;
    }

    if (outputPath.empty()) {
        out << result.str();
    } else {
        std::ofstream f(outputPath, std::ios::binary);
        if (!f || !(f << result.str())) {
            err << "error: cannot write '" << outputPath << "'\n";
            return kExitUsage;
        }
    }
    return status;
}

} // namespace ontokit
