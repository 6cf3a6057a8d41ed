#pragma once

#include <cstdint>
#include <iterator>
#include <random>
#include <string>

#include "hmiv/dsl.hpp"

// Fuzz corpus for the DSL front end: random bytes, keyword soup and
// mutated slices of a seed model, in rotation.
namespace hmiv::testkit::dsl_fuzz {

inline std::string make_input(std::size_t i, std::mt19937_64& rng, const std::string& seed_model) {
  static const char* kTokens[] = {"statechart", "petrinet", "taskmodel", "correspondence", "property", "modes",
                                  "initial", "var", "transition", "task", "enable", "choice", "{", "}", "(", ")",
                                  ";", ",", ":", "->", "<-", "=", ":=", "when", "do", "on", "A", "x", "1.00",
                                  "\"s\"", "decimal", "enum", "string(5, \"01\")", "[1.00, 2.00]", "always", "//c\n"};
  std::string text;
  const std::size_t len = rng() % 4097;
  switch (i % 3) {
    case 0:
      for (std::size_t k = 0; k < len; ++k) text.push_back(static_cast<char>(rng() & 0xff));
      break;
    case 1:
      while (text.size() < len) {
        text += kTokens[rng() % std::size(kTokens)];
        text += ' ';
      }
      text.resize(len);
      break;
    default: {
      const std::size_t start = rng() % seed_model.size();
      text = seed_model.substr(start, len);
      for (int m = 0; m < 4 && !text.empty(); ++m) text[rng() % text.size()] = static_cast<char>(rng() & 0x7f);
    }
  }
  return text;
}

// Empty when parsing behaves: diagnostic spans lie inside the input and an
// accepted document survives a serialize/parse round trip.
inline std::string check(const std::string& text) {
  auto r = dsl::parse_document(text);
  for (const auto& d : r.diagnostics) {
    if (d.span.begin.offset > d.span.end.offset || d.span.end.offset > text.size())
      return "span outside input: " + d.message;
    if (d.span.begin.line < 1 || d.span.begin.column < 1) return "bad position: " + d.message;
  }
  if (r.ok() && !r.document.empty()) {
    auto again = dsl::parse_document(dsl::serialize_document(r.document));
    if (!again.ok()) return "serialized document does not parse";
    if (!(again.document == r.document)) return "round trip changed the document";
  }
  return {};
}

// Runs n inputs; returns the first failure prefixed by its index.
inline std::string run(std::size_t n, std::uint64_t seed, const std::string& seed_model) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const auto text = make_input(i, rng, seed_model);
    auto failure = check(text);
    if (!failure.empty()) return "input " + std::to_string(i) + ": " + failure;
  }
  return {};
}

}  // namespace hmiv::testkit::dsl_fuzz
