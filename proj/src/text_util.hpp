#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grp/diagnostic.hpp"

namespace grp::detail {

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Offsets of the trimmed range within `s`.
ByteSpan trim_ascii(std::string_view s);

inline std::string_view trimmed(std::string_view s) {
  const ByteSpan r = trim_ascii(s);
  return s.substr(r.begin, r.end - r.begin);
}

// Decodes one code point at `pos`. Returns nullopt on a malformed sequence;
// `len` is always set to the number of bytes to advance (>= 1).
std::optional<char32_t> decode_utf8(std::string_view s, std::size_t pos,
                                    std::size_t& len);

std::optional<std::size_t> first_invalid_utf8(std::string_view s);

// Copy of `s` with each malformed sequence replaced by U+FFFD.
std::string repair_utf8(std::string_view s);

// Unicode White_Space property.
bool is_unicode_space(char32_t cp);

struct Attribute {
  std::string_view name;
  std::string_view value;
  ByteSpan span;        // whole name="value"
  ByteSpan value_span;  // inside the quotes
};

struct Tag {
  bool closing = false;
  std::string_view name;
  std::vector<Attribute> attributes;
  ByteSpan span;
};

// Tries to read a tag starting at src[pos] == '<'. Returns nullopt when the
// bytes there are not tag syntax (they are then ordinary text).
std::optional<Tag> lex_tag(std::string_view src, std::size_t pos);

// A tag whose name is `node` or one of the block labels.
bool is_structural(const Tag& tag);

}  // namespace grp::detail
