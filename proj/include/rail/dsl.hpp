#pragma once

#include <string>
#include <vector>

#include "rail/model.hpp"

namespace rail {

struct SourceSpan {
    int line = 1;     // 1-based
    int column = 1;   // 1-based
    size_t offset = 0;  // 0-based byte offset into the input
};

enum class ParseCode {
    Syntax,
    BadNumber,
    DuplicateId,
    DuplicateConnection,
    MissingConnection,
    SegSelfLoop,
    UnknownRef,
    UnknownParam,
};

const char* parse_code_name(ParseCode code);

struct ParseError {
    SourceSpan span;
    ParseCode code;
    std::string message;
};

struct ParseResult {
    ConstrainedRailwaySystem system;  // meaningful iff ok()
    std::vector<ParseError> errors;
    bool ok() const { return errors.empty(); }
};

// Parses the textual problem format (see docs/format.md). Reference
// resolution happens in a second pass, so declarations may appear in any
// order. Semantic validation beyond reference resolution is left to
// validate_system.
ParseResult parse_system(const std::string& text);

// Canonical rendering: sections in fixed order, entries sorted by id,
// rationals printed exactly. parse_system(render_system(s)) is structurally
// equal to s, and the output is byte-stable.
std::string render_system(const ConstrainedRailwaySystem& sys);

}  // namespace rail
