#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ontokit {

enum class ErrorCode {
    NoKind,
    AmbiguousKind,
    NotSortal,
    UnknownClassifier,
    UnknownRelation,
    NotMaterial,
    AlreadyDerived,
    NameClash,
    NotComparative,
    UnorderedSpace,
    NoSharedBearer,
    NotBinaryRelator,
    IllFormedModel,
    ScopeTooLarge,
    InvalidScope,
    InvalidGoal,
    MissingQualityValue,
    Unsupported,
};

std::string_view to_string(ErrorCode code);

// Failure of a model operation. Parse failures are reported as values
// (see frontend.hpp), everything else throws this.
class OntoError : public std::runtime_error {
public:
    OntoError(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace ontokit
