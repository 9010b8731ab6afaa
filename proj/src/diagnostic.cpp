#include "ontokit/diagnostic.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <json.hpp>

namespace ontokit {

std::string_view to_string(Severity s) {
    switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
    }
    return "?";
}

namespace {

std::pair<std::string, long> split_rule_id(const std::string& id) {
    std::size_t i = 0;
    while (i < id.size() && !std::isdigit(static_cast<unsigned char>(id[i]))) ++i;
    long n = i < id.size() ? std::stol(id.substr(i)) : 0;
    return {id.substr(0, i), n};
}

} // namespace

bool diagnostic_less(const Diagnostic& a, const Diagnostic& b) {
    if (a.span != b.span) return a.span < b.span;
    auto ka = split_rule_id(a.ruleId);
    auto kb = split_rule_id(b.ruleId);
    if (ka != kb) return ka < kb;
    if (a.message != b.message) return a.message < b.message;
    return a.related < b.related;
}

void sort_diagnostics(std::vector<Diagnostic>& diags) { std::stable_sort(diags.begin(), diags.end(), diagnostic_less); }

bool has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string diagnostics_to_json(const Model* model, const std::vector<Diagnostic>& diags) {
    using nlohmann::json;
    json arr = json::array();
    for (const auto& d : diags) {
        json j{{"ruleId", d.ruleId},
               {"severity", std::string(to_string(d.severity))},
               {"message", d.message},
               {"span", json{{"line", d.span.line}, {"col", d.span.column}, {"len", d.span.length}}},
               {"related", d.related}};
        if (d.witness && model) j["witness"] = json::parse(world_to_json(*model, *d.witness, -1));
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::string diagnostics_to_text(const std::vector<Diagnostic>& diags, std::string_view file) {
    std::ostringstream out;
    for (const auto& d : diags) {
        out << file << ':' << d.span.line << ':' << d.span.column << ": " << to_string(d.severity) << " ["
            << d.ruleId << "] " << d.message << '\n';
    }
    return out.str();
}

} // namespace ontokit
