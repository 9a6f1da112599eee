#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "vfc/syntax.hpp"

namespace vfc::syntax::detail {

enum class TokKind : std::uint8_t { Identifier, Keyword, Number, String, Char, Punct, Comment, Preproc };

struct Token {
  TokKind kind;
  std::uint32_t begin;
  std::uint32_t end;
  int line_begin;
  int line_end;
  std::string_view text;
  bool continues_directive = false;  // Preproc text resumed after a comment
};

/// Splits C/C++ source into tokens, including comment and preprocessor
/// tokens. Never fails: unterminated literals/comments end at EOF or EOL.
std::vector<Token> lex(std::string_view src, Language lang);

bool is_keyword(std::string_view word, Language lang);
bool is_primitive_type(std::string_view word);

}  // namespace vfc::syntax::detail
