#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ontokit/frontend.hpp"
#include "ontokit/model.hpp"

namespace testing {

inline std::string fixture_path(const std::string& name) { return std::string(ONTOKIT_FIXTURES) + "/" + name; }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

inline ontokit::Model parse(const std::string& text) {
    auto r = ontokit::parse_text(text);
    if (!r.ok()) {
        std::string msg;
        for (const auto& e : r.errors)
            msg += std::to_string(e.span.line) + ":" + std::to_string(e.span.column) + " " + e.message + "\n";
        throw std::runtime_error("parse failed:\n" + msg);
    }
    return *r.model;
}

inline ontokit::Model fixture(const std::string& name) { return parse(read_file(fixture_path(name))); }

// Replaces the first occurrence of `from`; throws when absent so mutants
// never silently equal their source.
inline std::string replace_once(std::string text, const std::string& from, const std::string& to) {
    auto pos = text.find(from);
    if (pos == std::string::npos) throw std::runtime_error("mutation anchor not found: " + from);
    return text.replace(pos, from.size(), to);
}

} // namespace testing
