#pragma once

#include "cdmetrics/diagram.hpp"
#include "cdmetrics/error.hpp"

#include <string>
#include <string_view>

namespace cdm {

// 1-based position in the source text. Columns count bytes.
struct SourceSpan {
    int line = 1;
    int column = 1;

    bool operator==(const SourceSpan&) const = default;
};

class SyntaxError : public Error {
public:
    SyntaxError(SourceSpan span, std::string message);

    SourceSpan span() const noexcept { return span_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    SourceSpan span_;
    std::string reason_;
};

// Line-oriented `.cd` grammar:
//
//   diagram <id>                    optional, first declaration only
//   class <Name> { ... }            body lines: `attr <name>`, `method <name>`
//   assoc <A> -- <B>
//   agg <Whole> o- <Part>
//   dep <A> -> <B>
//   gen <Child> => <Parent>
//
// `#` starts a comment, blank lines are ignored, CRLF is accepted.
// The result is not validated.
ClassDiagram parse(std::string_view source);

// Canonical text: header, classes, then relationships grouped by kind
// (assoc, agg, dep, gen), source order within each group. LF line endings.
std::string serialize(const ClassDiagram& diagram);

// Stable reordering of relationships into the canonical kind grouping.
// parse(serialize(d)) == canonical_order(d) for every well-formed d.
ClassDiagram canonical_order(ClassDiagram diagram);

// Structured-data form:
//   {"id": ..., "classes": [{"name", "attributes", "methods"}],
//    "relationships": [{"kind", "from", "to"}]}
// Throws SyntaxError (line/column of the JSON parser) on malformed input.
ClassDiagram parse_json(std::string_view text);
std::string to_json(const ClassDiagram& diagram);

} // namespace cdm
