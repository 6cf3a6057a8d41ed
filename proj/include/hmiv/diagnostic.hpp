#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hmiv {

struct SourcePos {
  std::uint32_t line = 1;
  std::uint32_t column = 1;
  std::uint32_t offset = 0;  // byte offset into the source text
};

struct Span {
  SourcePos begin;
  SourcePos end;
};

enum class Severity { error, warning };

// Stable diagnostic codes.
namespace diag {
inline constexpr const char* syntax = "syntax";
inline constexpr const char* duplicate_name = "duplicate-name";
inline constexpr const char* unresolved = "unresolved-reference";
inline constexpr const char* type_error = "type-error";
inline constexpr const char* invalid_value = "invalid-value";
inline constexpr const char* structure = "structure";
inline constexpr const char* unbound_output = "unbound-output";
inline constexpr const char* unbound_input = "unbound-input";
}  // namespace diag

struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  std::string message;
  Span span;
};

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == Severity::error) return true;
  return false;
}

inline Diagnostic make_error(const char* code, std::string message, Span span) {
  return Diagnostic{Severity::error, code, std::move(message), span};
}

std::string format_diagnostic(const Diagnostic& d, const std::string& file = {});

}  // namespace hmiv
