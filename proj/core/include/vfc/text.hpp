#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vfc {

/// Result of decoding bytes as UTF-8. Invalid sequences are replaced by
/// U+FFFD and `lossy` is set.
struct DecodedText {
  std::string text;
  bool lossy = false;
};

DecodedText sanitize_utf8(std::string_view bytes);

/// One physical line. `newline` is false only for a final unterminated line.
struct TextLine {
  std::string_view text;
  bool newline = true;
};

/// Splits on '\n'. An empty input yields no lines; a trailing '\n' does not
/// produce an extra empty line.
std::vector<TextLine> split_lines(std::string_view text);

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);
std::vector<std::string> split(std::string_view s, char sep);
std::string collapse_whitespace(std::string_view s);

/// FNV-1a, 64 bit. Stable across platforms; used for fingerprints.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

}  // namespace vfc
