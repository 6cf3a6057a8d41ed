#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hmiv/diagnostic.hpp"
#include "hmiv/document.hpp"

namespace hmiv::dsl {

// Nesting limits that keep parsing bounded on hostile input.
inline constexpr int kMaxExprDepth = 128;
inline constexpr int kMaxTaskDepth = 64;

struct ParseResult {
  Document document;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return !has_errors(diagnostics); }
};

// Parses and resolves. Never throws on malformed input.
ParseResult parse_document(std::string_view text);

// Canonical text. parse_document(serialize_document(d)) == d.
std::string serialize_document(const Document& doc);

// Resolves every element in place (derived tables, name indices) and
// checks cross-references.
std::vector<Diagnostic> resolve_document(Document& doc);

// Diagnostics for a copy of doc; empty iff every invariant holds.
std::vector<Diagnostic> validate_document(const Document& doc);

}  // namespace hmiv::dsl
