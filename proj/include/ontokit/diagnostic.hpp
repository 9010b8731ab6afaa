#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ontokit/model.hpp"
#include "ontokit/world.hpp"

namespace ontokit {

enum class Severity { Error, Warning, Info };

std::string_view to_string(Severity s);

struct Diagnostic {
    std::string ruleId; // "R1".."R10", "AP1", "AP2"
    Severity severity = Severity::Error;
    SourceSpan span;
    std::string message;
    std::vector<std::string> related;
    std::optional<InstanceWorld> witness;
};

// Order used for all diagnostic lists: span, then rule id with numeric suffix
// compared as a number (R2 before R10).
bool diagnostic_less(const Diagnostic& a, const Diagnostic& b);
void sort_diagnostics(std::vector<Diagnostic>& diags);
bool has_errors(const std::vector<Diagnostic>& diags);

std::string diagnostics_to_json(const Model* model, const std::vector<Diagnostic>& diags);
std::string diagnostics_to_text(const std::vector<Diagnostic>& diags, std::string_view file);

} // namespace ontokit
