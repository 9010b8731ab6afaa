#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ontokit/model.hpp"

namespace ontokit {

struct ParseError {
    SourceSpan span;
    std::string message;
    std::vector<std::string> expected; // token descriptions, e.g. "identifier", "'--'"
};

// Exactly one of model / errors is populated.
struct ParseResult {
    std::optional<Model> model;
    std::vector<ParseError> errors;

    bool ok() const { return model.has_value(); }
};

/// Parses the `.onto` DSL. Recovery resumes at the next declaration keyword,
/// so one call reports every malformed declaration it can find. Structural
/// errors (unknown names, cycles, ...) are reported after syntax succeeds.
ParseResult parse_text(std::string_view source);

/// Canonical JSON interchange form (`.onto.json`): sorted keys, declarations
/// sorted by category then name, two-space indentation, trailing newline.
std::string emit_json(const Model& model);

/// Inverse of emit_json. Schema violations carry a JSON path in the message.
ParseResult load_json(std::string_view bytes);

/// Renders the model back to DSL text, one declaration per line.
std::string emit_dsl(const Model& model);

} // namespace ontokit
