#include "lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace vfc::syntax::detail {

namespace {

const std::unordered_set<std::string_view> kCKeywords = {
    "auto",     "break",    "case",     "char",     "const",    "continue", "default",
    "do",       "double",   "else",     "enum",     "extern",   "float",    "for",
    "goto",     "if",       "inline",   "int",      "long",     "register", "restrict",
    "return",   "short",    "signed",   "sizeof",   "static",   "struct",   "switch",
    "typedef",  "union",    "unsigned", "void",     "volatile", "while",    "_Bool",
    "_Complex", "_Atomic",  "_Alignas", "_Alignof", "_Noreturn", "_Static_assert",
    "_Thread_local", "__restrict", "__restrict__", "__inline", "__inline__", "__volatile__",
    "asm",      "__asm__",  "__asm",    "__attribute__", "__extension__", "__typeof__", "typeof",
    "alignof",  "__alignof__",
};

const std::unordered_set<std::string_view> kCppOnlyKeywords = {
    "alignas",   "bool",      "catch",    "char8_t",  "char16_t", "char32_t",  "class",
    "concept",   "consteval", "constexpr", "constinit", "const_cast", "co_await", "co_return",
    "co_yield",  "decltype",  "delete",   "dynamic_cast", "explicit", "export", "false",
    "friend",    "mutable",   "namespace", "new",     "noexcept", "nullptr",   "operator",
    "private",   "protected", "public",   "reinterpret_cast", "requires", "static_assert",
    "static_cast", "template", "this",    "thread_local", "throw", "true",     "try",
    "typeid",    "typename",  "using",    "virtual",  "wchar_t",  "override",  "final",
};

const std::unordered_set<std::string_view> kPrimitiveTypes = {
    "void",  "char",   "short",  "int",      "long",     "float",    "double",  "signed",
    "unsigned", "_Bool", "bool", "wchar_t", "char8_t", "char16_t", "char32_t", "_Complex",
    "auto",
};

// Longest first.
constexpr std::array<std::string_view, 44> kPuncts = {
    "<<=", ">>=", "...", "->*", "<=>", "::", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=",
    "&&",  "||",  "+=",  "-=",  "*=",  "/=", "%=", "&=", "|=", "^=", ".*", "##", "{",  "}",  "[",
    "]",   "(",   ")",   ";",   ":",   ",",  "?",  "~",  "!",  "+",  "-",  "*",  "/",  "%",
};
constexpr std::array<std::string_view, 8> kPunctsTail = {"<", ">", "=", "&", "|", "^", ".", "#"};

bool ident_start(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '_' || c == '$' || u >= 0x80;
}
bool ident_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '$' || u >= 0x80;
}

class Lexer {
 public:
  Lexer(std::string_view src, Language lang) : src_(src), lang_(lang) {}

  std::vector<Token> run() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
        at_line_start_ = true;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
        continue;
      }
      if (c == '\\' && peek(1) == '\n') {  // stray line continuation
        pos_ += 2;
        ++line_;
        continue;
      }
      if (c == '/' && peek(1) == '/') {
        line_comment();
      } else if (c == '/' && peek(1) == '*') {
        block_comment();
      } else if (c == '#' && at_line_start_) {
        directive(false);
      } else {
        token();
      }
      at_line_start_ = false;
    }
    return std::move(out_);
  }

 private:
  char peek(std::size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  void emit(TokKind kind, std::size_t begin, int line_begin, bool cont = false) {
    out_.push_back({kind, static_cast<std::uint32_t>(begin), static_cast<std::uint32_t>(pos_), line_begin,
                    line_, src_.substr(begin, pos_ - begin), cont});
  }

  void line_comment() {
    const std::size_t begin = pos_;
    const int line = line_;
    while (pos_ < src_.size() && src_[pos_] != '\n') {
      if (src_[pos_] == '\\' && peek(1) == '\n') {
        pos_ += 2;
        ++line_;
        continue;
      }
      ++pos_;
    }
    emit(TokKind::Comment, begin, line);
  }

  void block_comment() {
    const std::size_t begin = pos_;
    const int line = line_;
    pos_ += 2;
    while (pos_ < src_.size() && !(src_[pos_] == '*' && peek(1) == '/')) {
      if (src_[pos_] == '\n') ++line_;
      ++pos_;
    }
    pos_ = std::min(src_.size(), pos_ + 2);
    emit(TokKind::Comment, begin, line);
  }

  // Skips a quoted literal starting at pos_ (which holds the quote).
  void skip_quoted(char quote) {
    ++pos_;
    while (pos_ < src_.size() && src_[pos_] != quote && src_[pos_] != '\n') {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) {
        if (src_[pos_ + 1] == '\n') ++line_;
        pos_ += 2;
        continue;
      }
      ++pos_;
    }
    if (pos_ < src_.size() && src_[pos_] == quote) ++pos_;
  }

  void raw_string() {
    // pos_ at '"' after the R prefix.
    const std::size_t open = src_.find('(', pos_);
    if (open == std::string_view::npos || open - pos_ > 17) {
      skip_quoted('"');
      return;
    }
    const std::string close = ")" + std::string(src_.substr(pos_ + 1, open - pos_ - 1)) + "\"";
    const std::size_t end = src_.find(close, open);
    const std::size_t stop = end == std::string_view::npos ? src_.size() : end + close.size();
    line_ += static_cast<int>(std::count(src_.begin() + static_cast<long>(pos_),
                                         src_.begin() + static_cast<long>(stop), '\n'));
    pos_ = stop;
  }

  // A directive runs to the end of the logical line. Comments inside are
  // emitted as their own tokens and the directive resumes after them.
  void directive(bool continuation) {
    std::size_t begin = pos_;
    int line = line_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') break;
      if (c == '\\' && peek(1) == '\n') {
        pos_ += 2;
        ++line_;
        continue;
      }
      if (c == '"' || c == '\'') {
        skip_quoted(c);
        continue;
      }
      if (c == '/' && (peek(1) == '/' || peek(1) == '*')) {
        std::size_t end = pos_;
        while (end > begin && (src_[end - 1] == ' ' || src_[end - 1] == '\t')) --end;
        if (end > begin) {
          const std::size_t save = pos_;
          pos_ = end;
          emit(TokKind::Preproc, begin, line, continuation);
          pos_ = save;
        }
        if (peek(1) == '/') {
          line_comment();
          return;
        }
        block_comment();
        // Resume the directive if more text follows on the same line.
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
        if (pos_ >= src_.size() || src_[pos_] == '\n') return;
        continuation = true;
        begin = pos_;
        line = line_;
        continue;
      }
      ++pos_;
    }
    std::size_t end = pos_;
    while (end > begin && std::isspace(static_cast<unsigned char>(src_[end - 1]))) --end;
    if (end > begin) {
      const std::size_t save = pos_;
      pos_ = end;
      emit(TokKind::Preproc, begin, line, continuation);
      pos_ = save;
    }
  }

  void token() {
    const std::size_t begin = pos_;
    const int line = line_;
    const char c = src_[pos_];

    if (ident_start(c)) {
      while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
      const std::string_view word = src_.substr(begin, pos_ - begin);
      if (pos_ < src_.size() && (src_[pos_] == '"' || src_[pos_] == '\'')) {
        static const std::unordered_set<std::string_view> prefixes = {"L", "u", "U", "u8"};
        static const std::unordered_set<std::string_view> raw = {"R", "LR", "uR", "UR", "u8R"};
        if (src_[pos_] == '"' && raw.count(word)) {
          raw_string();
          emit(TokKind::String, begin, line);
          return;
        }
        if (prefixes.count(word)) {
          const char q = src_[pos_];
          skip_quoted(q);
          emit(q == '"' ? TokKind::String : TokKind::Char, begin, line);
          return;
        }
      }
      emit(is_keyword(word, lang_) ? TokKind::Keyword : TokKind::Identifier, begin, line);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      ++pos_;
      while (pos_ < src_.size()) {
        const char d = src_[pos_];
        if ((d == '+' || d == '-') && pos_ > begin) {
          const char prev = static_cast<char>(std::tolower(static_cast<unsigned char>(src_[pos_ - 1])));
          if (prev == 'e' || prev == 'p') {
            ++pos_;
            continue;
          }
          break;
        }
        if (ident_char(d) || d == '.' ||
            (d == '\'' && lang_ == Language::Cpp && std::isalnum(static_cast<unsigned char>(peek(1))))) {
          ++pos_;
          continue;
        }
        break;
      }
      emit(TokKind::Number, begin, line);
      return;
    }
    if (c == '"' || c == '\'') {
      skip_quoted(c);
      emit(c == '"' ? TokKind::String : TokKind::Char, begin, line);
      return;
    }
    for (auto p : kPuncts) {
      if (src_.substr(pos_, p.size()) == p) {
        pos_ += p.size();
        emit(TokKind::Punct, begin, line);
        return;
      }
    }
    for (auto p : kPunctsTail) {
      if (src_.substr(pos_, p.size()) == p) {
        pos_ += p.size();
        emit(TokKind::Punct, begin, line);
        return;
      }
    }
    // Unknown byte (e.g. '@', '`'): single-character punctuation.
    ++pos_;
    emit(TokKind::Punct, begin, line);
  }

  std::string_view src_;
  Language lang_;
  std::size_t pos_ = 0;
  int line_ = 1;
  bool at_line_start_ = true;
  std::vector<Token> out_;
};

}  // namespace

bool is_keyword(std::string_view word, Language lang) {
  if (kCKeywords.count(word)) return true;
  return lang == Language::Cpp && kCppOnlyKeywords.count(word);
}

bool is_primitive_type(std::string_view word) { return kPrimitiveTypes.count(word) > 0; }

std::vector<Token> lex(std::string_view src, Language lang) { return Lexer(src, lang).run(); }

}  // namespace vfc::syntax::detail
