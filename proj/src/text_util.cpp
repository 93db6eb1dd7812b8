#include "text_util.hpp"

#include "grp/trace.hpp"

namespace grp::detail {

ByteSpan trim_ascii(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_ascii_space(s[b])) ++b;
  while (e > b && is_ascii_space(s[e - 1])) --e;
  return {b, e};
}

std::optional<char32_t> decode_utf8(std::string_view s, std::size_t pos,
                                    std::size_t& len) {
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(s[i]);
  };
  len = 1;
  const unsigned char b0 = byte(pos);
  if (b0 < 0x80) return b0;

  std::size_t need = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    need = 1;
    cp = b0 & 0x1F;
    min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    need = 2;
    cp = b0 & 0x0F;
    min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    need = 3;
    cp = b0 & 0x07;
    min = 0x10000;
  } else {
    return std::nullopt;
  }
  if (pos + need >= s.size()) return std::nullopt;
  for (std::size_t i = 1; i <= need; ++i) {
    const unsigned char b = byte(pos + i);
    if ((b & 0xC0) != 0x80) return std::nullopt;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return std::nullopt;
  }
  len = need + 1;
  return cp;
}

std::optional<std::size_t> first_invalid_utf8(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t len = 1;
    if (!decode_utf8(s, pos, len)) return pos;
    pos += len;
  }
  return std::nullopt;
}

std::string repair_utf8(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t len = 1;
    if (decode_utf8(s, pos, len)) {
      out.append(s.substr(pos, len));
    } else {
      out.append("\xEF\xBF\xBD");
    }
    pos += len;
  }
  return out;
}

bool is_unicode_space(char32_t cp) {
  if (cp >= 0x09 && cp <= 0x0D) return true;
  switch (cp) {
    case 0x20:
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

namespace {

bool is_name_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-';
}

std::size_t skip_space(std::string_view s, std::size_t pos) {
  while (pos < s.size() && is_ascii_space(s[pos])) ++pos;
  return pos;
}

std::size_t read_name(std::string_view s, std::size_t pos) {
  if (pos >= s.size() || !is_name_start(s[pos])) return pos;
  ++pos;
  while (pos < s.size() && is_name_char(s[pos])) ++pos;
  return pos;
}

}  // namespace

std::optional<Tag> lex_tag(std::string_view src, std::size_t pos) {
  if (pos >= src.size() || src[pos] != '<') return std::nullopt;
  Tag tag;
  std::size_t p = pos + 1;
  if (p < src.size() && src[p] == '/') {
    tag.closing = true;
    ++p;
  }
  const std::size_t name_end = read_name(src, p);
  if (name_end == p) return std::nullopt;
  tag.name = src.substr(p, name_end - p);
  p = name_end;

  if (tag.closing) {
    p = skip_space(src, p);
    if (p >= src.size() || src[p] != '>') return std::nullopt;
    tag.span = {pos, p + 1};
    return tag;
  }

  while (true) {
    const std::size_t after_space = skip_space(src, p);
    if (after_space >= src.size()) return std::nullopt;
    if (src[after_space] == '>') {
      tag.span = {pos, after_space + 1};
      return tag;
    }
    if (after_space == p) return std::nullopt;  // attributes need whitespace
    p = after_space;

    const std::size_t attr_begin = p;
    const std::size_t attr_name_end = read_name(src, p);
    if (attr_name_end == p) return std::nullopt;
    Attribute attr;
    attr.name = src.substr(p, attr_name_end - p);
    p = skip_space(src, attr_name_end);
    if (p >= src.size() || src[p] != '=') return std::nullopt;
    p = skip_space(src, p + 1);
    if (p >= src.size() || src[p] != '"') return std::nullopt;
    const std::size_t value_begin = ++p;
    while (p < src.size() && src[p] != '"') {
      if (src[p] == '<' || src[p] == '>' || src[p] == '\n') return std::nullopt;
      ++p;
    }
    if (p >= src.size()) return std::nullopt;
    attr.value = src.substr(value_begin, p - value_begin);
    attr.value_span = {value_begin, p};
    ++p;  // closing quote
    attr.span = {attr_begin, p};
    tag.attributes.push_back(attr);
  }
}

bool is_structural(const Tag& tag) {
  return tag.name == "node" || label_from_string(tag.name).has_value();
}

}  // namespace grp::detail
