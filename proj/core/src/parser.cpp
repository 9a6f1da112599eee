// Error-tolerant recursive-descent parser for C and C++ producing a CST
// whose node kinds follow tree-sitter naming (function_definition,
// if_statement, assignment_expression, ...). Every non-comment token becomes
// a leaf; comments are attached afterwards to the deepest enclosing node.

#include <algorithm>
#include <unordered_set>

#include "lexer.hpp"
#include "parser.hpp"
#include "vfc/text.hpp"

namespace vfc::syntax::detail {

namespace {

struct Fail {};

constexpr std::uint32_t kNone = 0xFFFFFFFFu;

struct BNode {
  std::string kind;
  std::string label;
  std::vector<std::uint32_t> children;
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  int line_begin = 0;
  int line_end = 0;
};

const std::unordered_set<std::string_view> kSpecifierKeywords = {
    "static",   "extern",    "register", "const",        "volatile",     "restrict", "__restrict",
    "__restrict__", "inline", "__inline", "__inline__",   "typedef",      "_Atomic",  "constexpr",
    "mutable",  "thread_local", "_Thread_local", "virtual", "explicit", "friend", "__extension__",
    "consteval", "constinit", "_Noreturn", "__volatile__", "typename", "export",
};

const std::unordered_set<std::string_view> kAttributeKeywords = {
    "__attribute__", "alignas", "_Alignas", "__declspec",
};

const std::unordered_set<std::string_view> kAssignOps = {
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=",
};

int binary_precedence(std::string_view op) {
  if (op == ",") return 1;
  if (kAssignOps.count(op)) return 2;
  if (op == "?") return 3;
  if (op == "||") return 4;
  if (op == "&&") return 5;
  if (op == "|") return 6;
  if (op == "^") return 7;
  if (op == "&") return 8;
  if (op == "==" || op == "!=") return 9;
  if (op == "<" || op == ">" || op == "<=" || op == ">=" || op == "<=>") return 10;
  if (op == "<<" || op == ">>") return 11;
  if (op == "+" || op == "-") return 12;
  if (op == "*" || op == "/" || op == "%") return 13;
  if (op == ".*" || op == "->*") return 14;
  return 0;
}

enum class ItemMode { File, Class };

class Parser {
 public:
  Parser(std::string_view src, Language lang) : src_(src), lang_(lang) {
    for (const auto& t : lex(src, lang)) {
      if (t.kind == TokKind::Comment)
        comments_.push_back(t);
      else
        toks_.push_back(t);
    }
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < src.size(); ++i)
      if (src[i] == '\n') line_starts_.push_back(static_cast<std::uint32_t>(i + 1));
  }

  SyntaxTree run(std::shared_ptr<const std::string> owned) {
    std::vector<std::uint32_t> items;
    while (!eof()) items.push_back(parse_item(ItemMode::File));
    const std::uint32_t root = make("translation_unit", std::move(items));
    arena_[root].begin = 0;
    arena_[root].end = static_cast<std::uint32_t>(src_.size());
    arena_[root].line_begin = 1;
    arena_[root].line_end = line_of(src_.empty() ? 0 : static_cast<std::uint32_t>(src_.size() - 1));
    for (const auto& c : comments_) attach_comment(root, c);
    return compact(root, std::move(owned));
  }

 private:
  // ---- token access ----------------------------------------------------
  bool eof() const { return pos_ >= toks_.size(); }
  const Token* tok(std::size_t k = 0) const {
    return pos_ + k < toks_.size() ? &toks_[pos_ + k] : nullptr;
  }
  std::string_view text(std::size_t k = 0) const {
    const Token* t = tok(k);
    return t ? t->text : std::string_view{};
  }
  bool at(std::string_view s, std::size_t k = 0) const {
    const Token* t = tok(k);
    return t && (t->kind == TokKind::Punct || t->kind == TokKind::Keyword) && t->text == s;
  }
  bool at_kind(TokKind kind, std::size_t k = 0) const {
    const Token* t = tok(k);
    return t && t->kind == kind;
  }
  bool at_ident(std::size_t k = 0) const { return at_kind(TokKind::Identifier, k); }
  bool cpp() const { return lang_ == Language::Cpp; }

  int line_of(std::uint32_t offset) const {
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    return static_cast<int>(it - line_starts_.begin());
  }

  // ---- node construction ----------------------------------------------
  std::uint32_t leaf_from(const Token& t, std::string kind, std::string label) {
    BNode n;
    n.kind = std::move(kind);
    n.label = std::move(label);
    n.begin = t.begin;
    n.end = t.end;
    n.line_begin = t.line_begin;
    n.line_end = t.line_end;
    arena_.push_back(std::move(n));
    return static_cast<std::uint32_t>(arena_.size() - 1);
  }

  // Default leaf classification of the current token.
  std::uint32_t leaf() {
    if (eof()) throw Fail{};
    const Token& t = toks_[pos_++];
    switch (t.kind) {
      case TokKind::Identifier: return leaf_from(t, "identifier", std::string(t.text));
      case TokKind::Number: return leaf_from(t, "number_literal", std::string(t.text));
      case TokKind::String: return leaf_from(t, "string_literal", std::string(t.text));
      case TokKind::Char: return leaf_from(t, "char_literal", std::string(t.text));
      case TokKind::Preproc: return leaf_from(t, "preproc_text", collapse_whitespace(t.text));
      case TokKind::Keyword:
        if (is_primitive_type(t.text)) return leaf_from(t, "primitive_type", std::string(t.text));
        return leaf_from(t, std::string(t.text), "");
      default: return leaf_from(t, std::string(t.text), "");
    }
  }

  std::uint32_t leaf_as(std::string kind) {
    if (eof()) throw Fail{};
    const Token& t = toks_[pos_++];
    return leaf_from(t, std::move(kind), std::string(t.text));
  }

  std::uint32_t expect(std::string_view s) {
    if (!at(s)) throw Fail{};
    return leaf();
  }

  std::uint32_t make(std::string kind, std::vector<std::uint32_t> children) {
    BNode n;
    n.kind = std::move(kind);
    if (children.empty()) {
      const std::uint32_t p = eof() ? static_cast<std::uint32_t>(src_.size()) : toks_[pos_].begin;
      n.begin = n.end = p;
      n.line_begin = n.line_end = line_of(p);
    } else {
      const BNode& first = arena_[children.front()];
      const BNode& last = arena_[children.back()];
      n.begin = first.begin;
      n.end = last.end;
      n.line_begin = first.line_begin;
      n.line_end = last.line_end;
    }
    n.children = std::move(children);
    arena_.push_back(std::move(n));
    return static_cast<std::uint32_t>(arena_.size() - 1);
  }

  std::uint32_t missing() {
    BNode n;
    n.kind = "ERROR";
    n.label = "MISSING";
    const std::uint32_t p = eof() ? static_cast<std::uint32_t>(src_.size()) : toks_[pos_].begin;
    n.begin = n.end = p;
    n.line_begin = n.line_end = line_of(p);
    arena_.push_back(std::move(n));
    return static_cast<std::uint32_t>(arena_.size() - 1);
  }

  // Index of the token matching the opener at `from` (absolute), or npos.
  std::size_t match_close(std::size_t from) const {
    int depth = 0;
    for (std::size_t i = from; i < toks_.size(); ++i) {
      const Token& t = toks_[i];
      if (t.kind != TokKind::Punct) continue;
      if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
      if (t.text == ")" || t.text == "]" || t.text == "}") {
        --depth;
        if (depth == 0) return i;
        if (depth < 0) return std::string::npos;
      }
    }
    return std::string::npos;
  }

  // Matching '>' for a template argument list opening at absolute `from`.
  std::size_t match_angle(std::size_t from) const {
    int depth = 0;
    for (std::size_t i = from; i < toks_.size() && i < from + 64; ++i) {
      const Token& t = toks_[i];
      if (t.kind == TokKind::Punct) {
        if (t.text == ";" || t.text == "{" || t.text == "}" || t.text == "&&" || t.text == "||")
          return std::string::npos;
        if (t.text == "(" || t.text == "[") {
          const std::size_t c = match_close(i);
          if (c == std::string::npos) return c;
          i = c;
          continue;
        }
        if (t.text == ")" || t.text == "]") return std::string::npos;
        if (t.text == "<") ++depth;
        if (t.text == ">") --depth;
        if (t.text == ">>") depth -= 2;
        if (depth <= 0) return depth == 0 ? i : std::string::npos;
      }
    }
    return std::string::npos;
  }

  // Consumes tokens [pos_, end] as leaves; identifiers get `ident_kind`.
  std::vector<std::uint32_t> leaves_until(std::size_t end_inclusive, std::string_view ident_kind = "identifier") {
    std::vector<std::uint32_t> out;
    while (pos_ <= end_inclusive && !eof()) {
      if (at_ident())
        out.push_back(leaf_as(std::string(ident_kind)));
      else
        out.push_back(leaf());
    }
    return out;
  }

  // ---- top level --------------------------------------------------------
  std::uint32_t parse_preproc() {
    const Token& first = toks_[pos_];
    std::string_view body = trim(first.text.substr(1));
    std::string_view name = body.substr(0, body.find_first_of(" \t(<\"\\"));
    std::string kind = "preproc_call";
    if (name == "include" || name == "include_next" || name == "import") kind = "preproc_include";
    else if (name == "define") kind = "preproc_def";
    else if (name == "if" || name == "ifdef" || name == "ifndef" || name == "elif" || name == "else" ||
             name == "endif" || name == "elifdef" || name == "elifndef")
      kind = "preproc_conditional";
    std::vector<std::uint32_t> parts;
    parts.push_back(leaf());
    while (!eof() && at_kind(TokKind::Preproc) && toks_[pos_].continues_directive) parts.push_back(leaf());
    if (parts.size() == 1) {
      arena_[parts[0]].kind = kind;
      return parts[0];
    }
    return make(kind, std::move(parts));
  }

  std::uint32_t parse_item(ItemMode mode) {
    if (at_kind(TokKind::Preproc)) return parse_preproc();
    if (at(";")) return make("empty_declaration", {leaf()});
    if (at("}") || at(")") || at("]")) return make("ERROR", {leaf()});
    if (mode == ItemMode::File &&
        (at("if") || at("while") || at("for") || at("do") || at("switch") || at("return") || at("break") ||
         at("continue") || at("goto") || at("case") || at("default")))
      return parse_statement();
    const std::size_t save = pos_;
    const std::size_t arena_save = arena_.size();
    if (cpp()) {
      if (at("namespace")) return guarded(save, [&] { return parse_namespace(); });
      if (at("template")) return guarded(save, [&] { return parse_template(mode); });
      if (at("using") || at("static_assert") || (at("friend") && !at("(", 1)))
        return guarded(save, [&] { return opaque_until_semicolon("declaration"); });
      if (mode == ItemMode::Class && (at("public") || at("private") || at("protected")) && at(":", 1)) {
        auto kw = leaf();
        return make("access_specifier", {kw, leaf()});
      }
    }
    if (at("extern") && at_kind(TokKind::String, 1) && at("{", 2)) {
      std::vector<std::uint32_t> kids{leaf(), leaf()};
      kids.push_back(parse_declaration_list(ItemMode::File));
      return make("linkage_specification", std::move(kids));
    }
    try {
      return parse_external_declaration(mode);
    } catch (const Fail&) {
      pos_ = save;
      arena_.resize(arena_save);
    }
    if (mode == ItemMode::File) {
      try {
        return parse_expression_statement();
      } catch (const Fail&) {
        pos_ = save;
        arena_.resize(arena_save);
      }
    }
    return recover(true);
  }

  template <class F>
  std::uint32_t guarded(std::size_t save, F&& f) {
    const std::size_t arena_save = arena_.size();
    try {
      return f();
    } catch (const Fail&) {
      pos_ = save;
      arena_.resize(arena_save);
      return recover(true);
    }
  }

  // Skips to the end of the current construct and wraps it in ERROR.
  std::uint32_t recover(bool top_level) {
    std::vector<std::uint32_t> kids;
    int depth = 0;
    int braces = 0;
    while (!eof()) {
      if (at("{")) ++braces;
      if (at("}") && braces > 0) --braces;
      if (at("(") || at("[") || at("{")) ++depth;
      if (at(")") || at("]") || at("}")) {
        if (depth == 0) {
          if (kids.empty() && top_level) kids.push_back(leaf());
          break;
        }
        --depth;
        const bool closes_block = at("}");
        kids.push_back(leaf());
        if (depth == 0 && closes_block && !at(";")) break;
        continue;
      }
      if (at(";") && braces == 0) {
        kids.push_back(leaf());
        break;
      }
      if (at_kind(TokKind::Preproc) && depth == 0 && !kids.empty()) break;
      kids.push_back(at_ident() ? leaf_as("identifier") : leaf());
    }
    if (kids.empty()) kids.push_back(leaf());
    return make("ERROR", std::move(kids));
  }

  std::uint32_t opaque_until_semicolon(std::string kind) {
    std::vector<std::uint32_t> kids;
    while (!eof() && !at(";")) {
      if (at("{") || at("(") || at("[")) {
        const std::size_t close = match_close(pos_);
        if (close == std::string::npos) throw Fail{};
        auto inner = leaves_until(close);
        kids.insert(kids.end(), inner.begin(), inner.end());
        continue;
      }
      if (at("}")) throw Fail{};
      kids.push_back(leaf());
    }
    kids.push_back(expect(";"));
    return make(std::move(kind), std::move(kids));
  }

  std::uint32_t parse_declaration_list(ItemMode mode) {
    std::vector<std::uint32_t> kids{expect("{")};
    while (!eof() && !at("}")) kids.push_back(parse_item(mode));
    kids.push_back(eof() ? missing() : leaf());
    return make(mode == ItemMode::Class ? "field_declaration_list" : "declaration_list", std::move(kids));
  }

  std::uint32_t parse_namespace() {
    std::vector<std::uint32_t> kids{leaf()};
    while (at_ident() || at("::") || at("inline")) kids.push_back(at_ident() ? leaf_as("namespace_identifier") : leaf());
    if (at("=")) {
      while (!eof() && !at(";")) kids.push_back(leaf());
      kids.push_back(expect(";"));
      return make("namespace_alias_definition", std::move(kids));
    }
    kids.push_back(parse_declaration_list(ItemMode::File));
    return make("namespace_definition", std::move(kids));
  }

  std::uint32_t parse_template(ItemMode mode) {
    std::vector<std::uint32_t> kids{leaf()};
    if (at("<")) {
      const std::size_t close = match_angle(pos_);
      if (close == std::string::npos) throw Fail{};
      auto params = leaves_until(close, "type_identifier");
      kids.push_back(make("template_parameter_list", std::move(params)));
    }
    kids.push_back(parse_item(mode));
    return make("template_declaration", std::move(kids));
  }

  std::uint32_t parse_external_declaration(ItemMode mode) {
    // Find the first depth-0 '{', ';' or '='.
    std::size_t q = pos_;
    int depth = 0;
    for (; q < toks_.size(); ++q) {
      const Token& t = toks_[q];
      if (t.kind != TokKind::Punct) continue;
      if (t.text == "(" || t.text == "[") ++depth;
      else if (t.text == ")" || t.text == "]") {
        if (--depth < 0) throw Fail{};
      } else if (depth == 0 && (t.text == "{" || t.text == ";" || t.text == "=")) break;
      else if (depth == 0 && t.text == "}") throw Fail{};
    }
    if (q >= toks_.size()) throw Fail{};

    if (toks_[q].text == "{") {
      bool record = false;
      bool paren = false;
      int d = 0;
      for (std::size_t i = pos_; i < q; ++i) {
        const Token& t = toks_[i];
        if (t.kind == TokKind::Keyword &&
            (t.text == "struct" || t.text == "union" || t.text == "enum" || t.text == "class") && d == 0)
          record = true;
        if (t.kind == TokKind::Punct && t.text == "(") {
          if (d == 0) paren = true;
          ++d;
        }
        if (t.kind == TokKind::Punct && t.text == ")") --d;
      }
      if (paren && !(record && !paren)) {
        const std::size_t save = pos_;
        const std::size_t arena_save = arena_.size();
        try {
          return parse_function_definition(q, mode);
        } catch (const Fail&) {
          pos_ = save;
          arena_.resize(arena_save);
        }
      }
    }
    return parse_declaration(true, /*statement_context=*/false, mode == ItemMode::Class);
  }

  // Locates the parameter list '(' of a function head in [pos_, q).
  std::size_t find_parameter_paren(std::size_t q) const {
    int depth = 0;
    for (std::size_t i = pos_; i < q; ++i) {
      const Token& t = toks_[i];
      if (t.kind != TokKind::Punct) continue;
      if (t.text == "(") {
        if (depth == 0 && i > pos_) {
          const Token& prev = toks_[i - 1];
          const bool name_like = prev.kind == TokKind::Identifier ||
                                 (prev.kind == TokKind::Punct && prev.text == ">") ||
                                 (prev.kind == TokKind::Keyword && prev.text == "operator");
          bool op_name = false;
          for (std::size_t k = pos_; k < i; ++k)
            if (toks_[k].kind == TokKind::Keyword && toks_[k].text == "operator") op_name = true;
          if (name_like || op_name) return i;
        }
        ++depth;
      } else if (t.text == ")") {
        --depth;
      }
    }
    return std::string::npos;
  }

  std::uint32_t parse_function_definition(std::size_t q, ItemMode mode) {
    std::size_t p = find_parameter_paren(q);
    if (p == std::string::npos) throw Fail{};
    const std::size_t close = match_close(p);
    if (close == std::string::npos || close >= q) throw Fail{};

    // Name: walk back over qualified-name pieces.
    std::size_t nb = p;
    std::size_t op_index = std::string::npos;
    for (std::size_t k = pos_; k < p; ++k)
      if (toks_[k].kind == TokKind::Keyword && toks_[k].text == "operator") op_index = k;
    if (op_index != std::string::npos) {
      nb = op_index;
    } else {
      std::size_t k = p - 1;
      if (toks_[k].text == ">") {
        int d = 0;
        while (k > pos_) {
          if (toks_[k].text == ">") ++d;
          if (toks_[k].text == ">>") d += 2;
          if (toks_[k].text == "<") --d;
          if (d == 0) break;
          --k;
        }
        --k;
      }
      if (toks_[k].kind != TokKind::Identifier) throw Fail{};
      nb = k;
    }
    while (nb >= pos_ + 1 && toks_[nb - 1].text == "~") --nb;
    while (nb >= pos_ + 2 && toks_[nb - 1].text == "::" &&
           (toks_[nb - 2].kind == TokKind::Identifier || toks_[nb - 2].text == ">")) {
      nb -= 2;
      if (toks_[nb].text == ">") {
        int d = 0;
        while (nb > pos_) {
          if (toks_[nb].text == ">") ++d;
          if (toks_[nb].text == "<") --d;
          if (d == 0) break;
          --nb;
        }
        if (nb == pos_) throw Fail{};
        --nb;
      }
    }
    if (nb >= pos_ + 1 && toks_[nb - 1].text == "::") --nb;

    std::vector<std::uint32_t> kids;
    while (pos_ < nb) kids.push_back(type_leaf());

    std::vector<std::uint32_t> name_parts;
    while (pos_ < p) {
      if (at_ident()) {
        const bool qualifier = at("::", 1) || (at("<", 1));
        name_parts.push_back(leaf_as(qualifier ? "namespace_identifier" : "identifier"));
      } else {
        name_parts.push_back(leaf());
      }
    }
    std::uint32_t name = name_parts.size() == 1 && arena_[name_parts[0]].kind == "identifier"
                             ? name_parts[0]
                             : make("qualified_identifier", std::move(name_parts));
    std::vector<std::uint32_t> decl{name, parse_parameter_list()};
    std::vector<std::uint32_t> init_list;
    while (pos_ < q) {
      if (at(":") && cpp()) {
        std::vector<std::uint32_t> inits{leaf()};
        auto rest = leaves_until(q - 1);
        inits.insert(inits.end(), rest.begin(), rest.end());
        init_list.push_back(make("field_initializer_list", std::move(inits)));
        break;
      }
      decl.push_back(at_ident() ? leaf_as("type_identifier") : leaf());
    }
    kids.push_back(make("function_declarator", std::move(decl)));
    kids.insert(kids.end(), init_list.begin(), init_list.end());
    kids.push_back(parse_compound_statement());
    (void)mode;
    return make("function_definition", std::move(kids));
  }

  std::uint32_t type_leaf() {
    if (at_ident()) return leaf_as("type_identifier");
    return leaf();
  }

  std::uint32_t parse_parameter_list() {
    if (!at("(")) throw Fail{};
    const std::size_t close = match_close(pos_);
    if (close == std::string::npos) throw Fail{};
    std::vector<std::uint32_t> kids{leaf()};
    while (pos_ < close) {
      // One parameter: tokens up to the next depth-0 ',' or the close.
      std::size_t end = pos_;
      int depth = 0;
      for (; end < close; ++end) {
        const Token& t = toks_[end];
        if (t.kind == TokKind::Punct) {
          if (t.text == "(" || t.text == "[" || t.text == "{" || t.text == "<") ++depth;
          if (t.text == ")" || t.text == "]" || t.text == "}" || t.text == ">") --depth;
          if (t.text == ">>") depth -= 2;
          if (t.text == "," && depth <= 0) break;
        }
      }
      if (end == pos_) {
        kids.push_back(leaf());  // stray ','
        continue;
      }
      kids.push_back(parameter_declaration(end));
      if (pos_ < close && at(",")) kids.push_back(leaf());
    }
    kids.push_back(leaf());  // ')'
    return make("parameter_list", std::move(kids));
  }

  // Parameter tokens [pos_, end). The declared name is the last identifier
  // at depth 0 when at least two type/name words are present, or the
  // identifier inside a function-pointer "(*name)" group.
  std::uint32_t parameter_declaration(std::size_t end) {
    if (end - pos_ == 1 && at("...")) return make("variadic_parameter", {leaf()});
    std::size_t name_at = std::string::npos;
    int words = 0;
    int depth = 0;
    bool in_default = false;
    for (std::size_t i = pos_; i < end; ++i) {
      const Token& t = toks_[i];
      if (t.kind == TokKind::Punct) {
        if (t.text == "=" && depth == 0) in_default = true;
        if (t.text == "(" || t.text == "[") ++depth;
        if (t.text == ")" || t.text == "]") --depth;
        if (t.text == "(" && i + 2 < end && toks_[i + 1].text == "*" &&
            toks_[i + 2].kind == TokKind::Identifier && name_at == std::string::npos)
          name_at = i + 2;
        continue;
      }
      if (in_default || depth != 0) continue;
      if (t.kind == TokKind::Identifier || (t.kind == TokKind::Keyword && is_primitive_type(t.text))) {
        ++words;
        if (t.kind == TokKind::Identifier && words >= 2) name_at = i;
      }
    }
    std::vector<std::uint32_t> kids;
    bool after_default = false;
    while (pos_ < end) {
      if (at("=")) after_default = true;
      if (pos_ == name_at || (after_default && at_ident()))
        kids.push_back(leaf_as("identifier"));
      else
        kids.push_back(type_leaf());
    }
    return make("parameter_declaration", std::move(kids));
  }

  // ---- statements -------------------------------------------------------
  std::uint32_t parse_compound_statement() {
    std::vector<std::uint32_t> kids{expect("{")};
    while (!eof() && !at("}")) kids.push_back(parse_statement());
    kids.push_back(eof() ? missing() : leaf());
    return make("compound_statement", std::move(kids));
  }

  std::uint32_t parse_statement() {
    const std::size_t save = pos_;
    const std::size_t arena_save = arena_.size();
    auto reset = [&] {
      pos_ = save;
      arena_.resize(arena_save);
    };
    try {
      if (at_kind(TokKind::Preproc)) return parse_preproc();
      if (at("{")) return parse_compound_statement();
      if (at(";")) return make("expression_statement", {leaf()});
      if (at("if")) return parse_if();
      if (at("while")) return parse_while();
      if (at("do")) return parse_do();
      if (at("for")) return parse_for();
      if (at("switch")) return parse_switch();
      if (at("case") || at("default")) return parse_case();
      if (at("return") || at("co_return")) return parse_return();
      if (at("break") || at("continue")) {
        const std::string kind = std::string(text()) + "_statement";
        auto kw = leaf();
        return make(kind, {kw, expect(";")});
      }
      if (at("goto")) {
        auto kw = leaf();
        auto label = at_ident() ? leaf_as("statement_identifier") : leaf();
        return make("goto_statement", {kw, label, expect(";")});
      }
      if (at("try") && cpp()) return parse_try();
      if (at("asm") || at("__asm__") || at("__asm")) return opaque_until_semicolon("asm_statement");
      if (at("else")) return make("ERROR", {leaf()});
      if (at_ident() && at(":", 1)) {
        std::vector<std::uint32_t> kids{leaf_as("statement_identifier"), leaf()};
        if (!eof() && !at("}")) kids.push_back(parse_statement());
        return make("labeled_statement", std::move(kids));
      }
      if (cpp() && (at("using") || at("static_assert") || at("namespace") || at("typedef")))
        return opaque_until_semicolon("declaration");
      if (looks_like_declaration()) {
        try {
          return parse_declaration(true, /*statement_context=*/true, false);
        } catch (const Fail&) {
          reset();
        }
      }
      return parse_expression_statement();
    } catch (const Fail&) {
      reset();
    }
    return recover(false);
  }

  std::uint32_t parse_expression_statement() {
    auto e = parse_expression();
    if (at(";")) return make("expression_statement", {e, leaf()});
    const bool is_call = arena_[e].kind == "call_expression";
    if (is_call && at("{")) {
      // Loop-like macro: list_for_each_entry(...) { ... }
      auto body = parse_statement();
      return make("macro_loop", {e, body});
    }
    const int prev_line = toks_[pos_ - 1].line_end;
    if (is_call && (eof() || at("}") || toks_[pos_].line_begin > prev_line))
      return make("expression_statement", {e});
    throw Fail{};
  }

  std::uint32_t parse_condition_clause() {
    std::vector<std::uint32_t> kids{expect("(")};
    if (at(")")) throw Fail{};
    const std::size_t save = pos_;
    const std::size_t arena_save = arena_.size();
    if (looks_like_declaration()) {
      try {
        auto decl = parse_declaration(false, true, false);
        if (at(";")) {
          kids.push_back(decl);
          kids.push_back(leaf());
          kids.push_back(parse_expression());
        } else {
          kids.push_back(decl);
        }
        kids.push_back(expect(")"));
        return make("condition_clause", std::move(kids));
      } catch (const Fail&) {
        pos_ = save;
        arena_.resize(arena_save);
      }
    }
    kids.push_back(parse_expression());
    kids.push_back(expect(")"));
    return make("condition_clause", std::move(kids));
  }

  std::uint32_t parse_if() {
    std::vector<std::uint32_t> kids{leaf()};
    if (at("constexpr")) kids.push_back(leaf());
    kids.push_back(parse_condition_clause());
    kids.push_back(parse_statement());
    if (at("else")) {
      auto kw = leaf();
      auto body = eof() ? missing() : parse_statement();
      kids.push_back(make("else_clause", {kw, body}));
    }
    return make("if_statement", std::move(kids));
  }

  std::uint32_t parse_while() {
    auto kw = leaf();
    auto cond = parse_condition_clause();
    return make("while_statement", {kw, cond, parse_statement()});
  }

  std::uint32_t parse_do() {
    std::vector<std::uint32_t> kids{leaf()};
    kids.push_back(parse_statement());
    kids.push_back(expect("while"));
    std::vector<std::uint32_t> paren{expect("(")};
    paren.push_back(parse_expression());
    paren.push_back(expect(")"));
    kids.push_back(make("parenthesized_expression", std::move(paren)));
    kids.push_back(expect(";"));
    return make("do_statement", std::move(kids));
  }

  std::uint32_t parse_for() {
    std::vector<std::uint32_t> kids{leaf()};
    if (!at("(")) throw Fail{};
    const std::size_t close = match_close(pos_);
    if (close == std::string::npos) throw Fail{};
    // Range-based for: a depth-0 ':' before the close and no depth-0 ';'.
    bool range = false;
    {
      int depth = 0;
      for (std::size_t i = pos_ + 1; i < close; ++i) {
        const auto& t = toks_[i];
        if (t.kind != TokKind::Punct) continue;
        if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
        if (t.text == ")" || t.text == "]" || t.text == "}") --depth;
        if (depth == 0 && t.text == ";") {
          range = false;
          break;
        }
        if (depth == 0 && t.text == ":") range = true;
      }
    }
    kids.push_back(leaf());  // '('
    if (range && cpp()) {
      std::vector<std::uint32_t> decl = parse_decl_specifiers(true);
      decl.push_back(parse_declarator(false));
      kids.push_back(make("declaration", std::move(decl)));
      kids.push_back(expect(":"));
      kids.push_back(at("{") ? parse_initializer_list() : parse_expression());
      kids.push_back(expect(")"));
      kids.push_back(parse_statement());
      return make("for_range_loop", std::move(kids));
    }
    if (at(";")) {
      kids.push_back(leaf());
    } else if (looks_like_declaration()) {
      kids.push_back(parse_declaration(true, true, false));
    } else {
      kids.push_back(parse_expression());
      kids.push_back(expect(";"));
    }
    if (!at(";")) kids.push_back(parse_expression());
    kids.push_back(expect(";"));
    if (!at(")")) kids.push_back(parse_expression());
    kids.push_back(expect(")"));
    kids.push_back(parse_statement());
    return make("for_statement", std::move(kids));
  }

  std::uint32_t parse_switch() {
    auto kw = leaf();
    auto cond = parse_condition_clause();
    return make("switch_statement", {kw, cond, parse_statement()});
  }

  std::uint32_t parse_case() {
    std::vector<std::uint32_t> kids{leaf()};
    if (!at(":")) {
      kids.push_back(parse_conditional());
      if (at("...")) {
        kids.push_back(leaf());
        kids.push_back(parse_conditional());
      }
    }
    kids.push_back(expect(":"));
    return make("case_statement", std::move(kids));
  }

  std::uint32_t parse_return() {
    std::vector<std::uint32_t> kids{leaf()};
    if (!at(";")) kids.push_back(at("{") ? parse_initializer_list() : parse_expression());
    kids.push_back(expect(";"));
    return make("return_statement", std::move(kids));
  }

  std::uint32_t parse_try() {
    std::vector<std::uint32_t> kids{leaf(), parse_compound_statement()};
    while (at("catch")) {
      auto kw = leaf();
      auto params = parse_parameter_list();
      kids.push_back(make("catch_clause", {kw, params, parse_compound_statement()}));
    }
    return make("try_statement", std::move(kids));
  }

  // ---- declarations -----------------------------------------------------
  // Skips a (possibly qualified, possibly templated) type name starting at
  // absolute index k; returns the index after it or npos.
  std::size_t skip_type_name(std::size_t k) const {
    if (k < toks_.size() && toks_[k].text == "::") ++k;
    if (k >= toks_.size() || toks_[k].kind != TokKind::Identifier) return std::string::npos;
    ++k;
    while (true) {
      if (cpp() && k < toks_.size() && toks_[k].text == "<") {
        const std::size_t save_pos = k;
        const std::size_t c = match_angle(save_pos);
        if (c == std::string::npos) return k;
        k = c + 1;
      }
      if (k + 1 < toks_.size() && toks_[k].text == "::" && toks_[k + 1].kind == TokKind::Identifier) {
        k += 2;
        continue;
      }
      return k;
    }
  }

  bool looks_like_declaration() const {
    const Token* t = tok();
    if (!t) return false;
    if (t->kind == TokKind::Keyword) {
      if (is_primitive_type(t->text)) return true;
      if (kSpecifierKeywords.count(t->text) || kAttributeKeywords.count(t->text)) return true;
      return t->text == "struct" || t->text == "union" || t->text == "enum" || t->text == "class" ||
             t->text == "decltype" || t->text == "typeof" || t->text == "__typeof__";
    }
    if (t->kind != TokKind::Identifier && !(cpp() && t->text == "::")) return false;
    std::size_t k = skip_type_name(pos_);
    if (k == std::string::npos) return false;
    bool pointer = false;
    while (k < toks_.size() && (toks_[k].text == "*" || toks_[k].text == "&" || toks_[k].text == "&&" ||
                                toks_[k].text == "const" || toks_[k].text == "volatile" ||
                                toks_[k].text == "restrict" || toks_[k].text == "__restrict")) {
      if (toks_[k].text != "&" && toks_[k].text != "&&") pointer = true;
      if ((toks_[k].text == "&" || toks_[k].text == "&&") && !cpp()) return false;
      ++k;
    }
    if (k >= toks_.size() || toks_[k].kind != TokKind::Identifier) return false;
    if (k + 1 >= toks_.size()) return false;
    const std::string_view next = toks_[k + 1].text;
    if (next == ";" || next == "=" || next == "," || next == "[" || next == "{") return true;
    if (next == "(") return cpp() || pointer;
    if (toks_[k + 1].kind == TokKind::Keyword && kAttributeKeywords.count(next)) return true;
    return false;
  }

  std::uint32_t parse_type_name() {
    std::vector<std::uint32_t> parts;
    if (at("::")) parts.push_back(leaf());
    if (!at_ident()) throw Fail{};
    while (true) {
      const bool qualifier = at("::", 1) || (cpp() && at("<", 1) && skip_type_name(pos_) != std::string::npos &&
                                              at_ident() && false);
      parts.push_back(leaf_as(qualifier ? "namespace_identifier" : "type_identifier"));
      if (cpp() && at("<")) {
        const std::size_t c = match_angle(pos_);
        if (c != std::string::npos) {
          auto args = leaves_until(c, "type_identifier");
          parts.push_back(make("template_argument_list", std::move(args)));
        }
      }
      if (at("::") && at_ident(1)) {
        parts.push_back(leaf());
        continue;
      }
      break;
    }
    if (parts.size() == 1) return parts[0];
    return make("qualified_type", std::move(parts));
  }

  std::uint32_t parse_attribute() {
    std::vector<std::uint32_t> kids{leaf()};
    if (at("(")) {
      const std::size_t c = match_close(pos_);
      if (c == std::string::npos) throw Fail{};
      auto inner = leaves_until(c);
      kids.insert(kids.end(), inner.begin(), inner.end());
    }
    return make("attribute_specifier", std::move(kids));
  }

  std::uint32_t parse_record_specifier() {
    const std::string kw(text());
    std::vector<std::uint32_t> kids{leaf()};
    if (kw == "enum" && (at("class") || at("struct"))) kids.push_back(leaf());
    while (at("__attribute__") || at("alignas") || at("__declspec")) kids.push_back(parse_attribute());
    if (at_ident() || at("::")) kids.push_back(parse_type_name());
    if (at("final")) kids.push_back(leaf());
    if (at(":")) {
      std::vector<std::uint32_t> base{leaf()};
      while (!eof() && !at("{") && !at(";")) base.push_back(type_leaf());
      kids.push_back(make(kw == "enum" ? "enum_base" : "base_class_clause", std::move(base)));
    }
    if (at("{")) {
      if (kw == "enum") {
        const std::size_t c = match_close(pos_);
        if (c == std::string::npos) throw Fail{};
        kids.push_back(make("enumerator_list", leaves_until(c)));
      } else {
        const bool saved = in_record_;
        in_record_ = true;
        kids.push_back(parse_declaration_list(ItemMode::Class));
        in_record_ = saved;
      }
    }
    return make(kw + "_specifier", std::move(kids));
  }

  // Returns the specifier nodes; throws Fail if no type was seen.
  std::vector<std::uint32_t> parse_decl_specifiers(bool require_type) {
    std::vector<std::uint32_t> specs;
    bool saw_type = false;
    while (!eof()) {
      const Token& t = toks_[pos_];
      if (t.kind == TokKind::Keyword) {
        if (kSpecifierKeywords.count(t.text)) {
          specs.push_back(leaf());
          continue;
        }
        if (is_primitive_type(t.text)) {
          specs.push_back(leaf());
          saw_type = true;
          continue;
        }
        if (t.text == "struct" || t.text == "union" || t.text == "enum" || t.text == "class") {
          specs.push_back(parse_record_specifier());
          saw_type = true;
          continue;
        }
        if (kAttributeKeywords.count(t.text)) {
          specs.push_back(parse_attribute());
          continue;
        }
        if (t.text == "decltype" || t.text == "typeof" || t.text == "__typeof__") {
          specs.push_back(parse_attribute());
          arena_[specs.back()].kind = "decltype";
          saw_type = true;
          continue;
        }
        break;
      }
      if ((t.kind == TokKind::Identifier || (cpp() && t.text == "::")) && !saw_type) {
        specs.push_back(parse_type_name());
        saw_type = true;
        continue;
      }
      break;
    }
    if (require_type && !saw_type) throw Fail{};
    return specs;
  }

  std::uint32_t parse_declaration(bool require_semicolon, bool statement_context, bool record_body) {
    std::vector<std::uint32_t> kids = parse_decl_specifiers(true);
    bool is_typedef = false;
    for (auto k : kids)
      if (arena_[k].kind == "typedef") is_typedef = true;
    while (!eof() && !at(";")) {
      kids.push_back(parse_init_declarator(statement_context, record_body));
      while (at("__attribute__")) kids.push_back(parse_attribute());
      if (at(",")) {
        kids.push_back(leaf());
        continue;
      }
      break;
    }
    if (require_semicolon) {
      kids.push_back(expect(";"));
    } else if (at(";") && false) {
      kids.push_back(leaf());
    }
    return make(is_typedef ? "type_definition" : (record_body ? "field_declaration" : "declaration"),
                std::move(kids));
  }

  std::uint32_t parse_init_declarator(bool statement_context, bool record_body) {
    auto d = parse_declarator(statement_context);
    if (at("=")) {
      auto eq = leaf();
      auto value = at("{") ? parse_initializer_list() : parse_assignment();
      return make("init_declarator", {d, eq, value});
    }
    if (cpp() && at("{")) return make("init_declarator", {d, parse_initializer_list()});
    if (record_body && at(":")) {
      auto colon = leaf();
      return make("bitfield_declarator", {d, colon, parse_conditional()});
    }
    return d;
  }

  // True when the tokens after '(' at absolute index k look like a parameter
  // list rather than constructor arguments.
  bool parameters_follow(std::size_t k) const {
    if (k + 1 >= toks_.size()) return false;
    const Token& t = toks_[k + 1];
    if (t.text == ")") return true;
    if (t.kind == TokKind::Keyword)
      return is_primitive_type(t.text) || kSpecifierKeywords.count(t.text) || t.text == "struct" ||
             t.text == "union" || t.text == "enum" || t.text == "...";
    if (t.text == "...") return true;
    if (t.kind == TokKind::Identifier && k + 2 < toks_.size()) {
      const Token& n = toks_[k + 2];
      return n.kind == TokKind::Identifier || n.text == "*" || n.text == "&";
    }
    return false;
  }

  std::uint32_t parse_declarator(bool statement_context) {
    if (at("*") || (cpp() && (at("&") || at("&&"))) || at("^")) {
      const bool ref = at("&") || at("&&");
      std::vector<std::uint32_t> kids{leaf()};
      while (at("const") || at("volatile") || at("restrict") || at("__restrict") || at("__restrict__") ||
             at("_Atomic") || at("__attribute__")) {
        kids.push_back(at("__attribute__") ? parse_attribute() : leaf());
      }
      kids.push_back(parse_declarator(statement_context));
      return make(ref ? "reference_declarator" : "pointer_declarator", std::move(kids));
    }
    std::uint32_t d;
    if (at_ident() || (cpp() && (at("::") || at("operator") || at("~")))) {
      std::vector<std::uint32_t> parts;
      while (at_ident() || at("::") || at("~") || at("operator")) {
        if (at("operator")) {
          parts.push_back(leaf());
          while (!eof() && !at("(")) parts.push_back(leaf());
          if (at("(") && at(")", 1) && at("(", 2)) {  // operator()
            parts.push_back(leaf());
            parts.push_back(leaf());
          }
          break;
        }
        const bool qualifier = at_ident() && at("::", 1);
        parts.push_back(at_ident() ? leaf_as(qualifier ? "namespace_identifier" : "identifier") : leaf());
        if (!at("::") && !(arena_[parts.back()].kind == "::") && !(arena_[parts.back()].kind == "~")) break;
      }
      d = parts.size() == 1 ? parts[0] : make("qualified_identifier", std::move(parts));
    } else if (at("(")) {
      auto open = leaf();
      auto inner = parse_declarator(statement_context);
      d = make("parenthesized_declarator", {open, inner, expect(")")});
    } else {
      throw Fail{};
    }
    while (true) {
      if (at("[")) {
        std::vector<std::uint32_t> kids{d, leaf()};
        if (!at("]")) kids.push_back(parse_expression());
        kids.push_back(expect("]"));
        d = make("array_declarator", std::move(kids));
        continue;
      }
      if (at("(")) {
        if (statement_context && arena_[d].kind == "identifier" && !parameters_follow(pos_)) {
          d = make("init_declarator", {d, parse_argument_list()});
          break;
        }
        std::vector<std::uint32_t> kids{d, parse_parameter_list()};
        while (at("const") || at("noexcept") || at("override") || at("final") || at("volatile") ||
               at("__attribute__")) {
          kids.push_back(at("__attribute__") ? parse_attribute() : leaf());
        }
        d = make("function_declarator", std::move(kids));
        continue;
      }
      break;
    }
    return d;
  }

  std::uint32_t parse_initializer_list() {
    std::vector<std::uint32_t> kids{expect("{")};
    while (!eof() && !at("}")) {
      if (at(",")) {
        kids.push_back(leaf());
        continue;
      }
      if (at(".") && at_ident(1)) {  // designated initializer
        std::vector<std::uint32_t> des{leaf(), leaf_as("field_identifier")};
        while (at(".") || at("[")) {
          if (at(".")) {
            des.push_back(leaf());
            des.push_back(leaf_as("field_identifier"));
          } else {
            des.push_back(leaf());
            des.push_back(parse_expression());
            des.push_back(expect("]"));
          }
        }
        des.push_back(expect("="));
        des.push_back(at("{") ? parse_initializer_list() : parse_assignment());
        kids.push_back(make("initializer_pair", std::move(des)));
        continue;
      }
      if (at("[")) {
        std::vector<std::uint32_t> des{leaf(), parse_expression(), expect("]")};
        if (at("=")) {
          des.push_back(leaf());
          des.push_back(at("{") ? parse_initializer_list() : parse_assignment());
          kids.push_back(make("initializer_pair", std::move(des)));
          continue;
        }
        throw Fail{};
      }
      kids.push_back(at("{") ? parse_initializer_list() : parse_assignment());
    }
    kids.push_back(expect("}"));
    return make("initializer_list", std::move(kids));
  }

  // ---- expressions ------------------------------------------------------
  std::uint32_t parse_expression() { return parse_binary(1); }
  std::uint32_t parse_assignment() { return parse_binary(2); }
  std::uint32_t parse_conditional() { return parse_binary(3); }

  std::uint32_t parse_binary(int min_prec) {
    auto left = parse_unary();
    while (!eof()) {
      const Token& t = toks_[pos_];
      if (t.kind != TokKind::Punct) break;
      const int prec = binary_precedence(t.text);
      if (prec == 0 || prec < min_prec) break;
      if (prec == 2) {
        auto op = leaf();
        auto right = at("{") ? parse_initializer_list() : parse_binary(2);
        left = make("assignment_expression", {left, op, right});
        continue;
      }
      if (prec == 3) {
        auto q = leaf();
        std::vector<std::uint32_t> kids{left, q};
        if (!at(":")) kids.push_back(parse_expression());
        kids.push_back(expect(":"));
        kids.push_back(parse_binary(2));
        left = make("conditional_expression", std::move(kids));
        continue;
      }
      auto op = leaf();
      auto right = parse_binary(prec + 1);
      left = make(prec == 1 ? "comma_expression" : "binary_expression", {left, op, right});
    }
    return left;
  }

  bool type_start(std::size_t k) const {
    if (k >= toks_.size()) return false;
    const Token& t = toks_[k];
    if (t.kind != TokKind::Keyword) return false;
    return is_primitive_type(t.text) || t.text == "struct" || t.text == "union" || t.text == "enum" ||
           t.text == "const" || t.text == "volatile" || t.text == "class" || t.text == "typename";
  }

  // At '(' (absolute k): is this "(type-name)"?
  bool is_parenthesized_type(std::size_t k, bool for_cast) const {
    if (type_start(k + 1)) {
      return match_close(k) != std::string::npos;
    }
    std::size_t j = skip_type_name(k + 1);
    if (j == std::string::npos) return false;
    bool pointer = false;
    while (j < toks_.size() && (toks_[j].text == "*" || toks_[j].text == "&" || toks_[j].text == "const")) {
      pointer = true;
      ++j;
    }
    if (j >= toks_.size() || toks_[j].text != ")") return false;
    if (pointer) return true;
    if (!for_cast) return false;
    // "(T) operand": the token after ')' must begin an operand and cannot
    // be a binary operator.
    if (j + 1 >= toks_.size()) return false;
    const Token& n = toks_[j + 1];
    if (n.kind == TokKind::Identifier || n.kind == TokKind::Number || n.kind == TokKind::String ||
        n.kind == TokKind::Char)
      return true;
    if (n.kind == TokKind::Keyword && (n.text == "sizeof" || n.text == "true" || n.text == "false" ||
                                       n.text == "nullptr" || n.text == "this"))
      return true;
    return n.text == "(" || n.text == "!" || n.text == "~";
  }

  std::uint32_t parse_type_descriptor() {
    std::vector<std::uint32_t> kids = parse_decl_specifiers(true);
    while (at("*") || at("&") || at("&&") || at("const") || at("volatile") || at("restrict") ||
           at("__restrict"))
      kids.push_back(leaf());
    if (at("(") && at("*", 1)) {
      const std::size_t c = match_close(pos_);
      if (c == std::string::npos) throw Fail{};
      auto inner = leaves_until(c);
      kids.insert(kids.end(), inner.begin(), inner.end());
      if (at("(")) {
        const std::size_t c2 = match_close(pos_);
        if (c2 == std::string::npos) throw Fail{};
        auto params = leaves_until(c2, "type_identifier");
        kids.insert(kids.end(), params.begin(), params.end());
      }
    }
    while (at("[")) {
      const std::size_t c = match_close(pos_);
      if (c == std::string::npos) throw Fail{};
      auto inner = leaves_until(c);
      kids.insert(kids.end(), inner.begin(), inner.end());
    }
    return make("type_descriptor", std::move(kids));
  }

  std::uint32_t parse_unary() {
    if (eof()) throw Fail{};
    const Token& t = toks_[pos_];
    if (t.kind == TokKind::Punct) {
      if (t.text == "++" || t.text == "--") {
        auto op = leaf();
        return make("update_expression", {op, parse_unary()});
      }
      if (t.text == "!" || t.text == "~" || t.text == "-" || t.text == "+") {
        auto op = leaf();
        return make("unary_expression", {op, parse_unary()});
      }
      if (t.text == "*" || t.text == "&") {
        auto op = leaf();
        return make("pointer_expression", {op, parse_unary()});
      }
      if (t.text == "&&") {  // GNU label address
        auto op = leaf();
        return make("unary_expression", {op, leaf_as("statement_identifier")});
      }
      if (t.text == "(" && is_parenthesized_type(pos_, true)) {
        auto open = leaf();
        auto type = parse_type_descriptor();
        auto close = expect(")");
        if (at("{")) return parse_postfix(make("compound_literal_expression", {open, type, close, parse_initializer_list()}));
        return make("cast_expression", {open, type, close, parse_unary()});
      }
    }
    if (t.kind == TokKind::Keyword) {
      if (t.text == "sizeof" || t.text == "alignof" || t.text == "_Alignof" || t.text == "__alignof__") {
        auto kw = leaf();
        if (at("(") && is_parenthesized_type(pos_, false)) {
          auto open = leaf();
          auto type = parse_type_descriptor();
          return make("sizeof_expression", {kw, open, type, expect(")")});
        }
        if (at("...")) {  // sizeof...(pack)
          auto dots = leaf();
          return make("sizeof_expression", {kw, dots, parse_unary()});
        }
        return make("sizeof_expression", {kw, parse_unary()});
      }
      if (t.text == "throw") {
        auto kw = leaf();
        if (at(";") || at(")") || at(",")) return make("throw_expression", {kw});
        return make("throw_expression", {kw, parse_assignment()});
      }
      if (t.text == "co_await" || t.text == "__extension__" || t.text == "co_yield") {
        auto kw = leaf();
        return make("unary_expression", {kw, parse_unary()});
      }
      if (t.text == "new") return parse_postfix(parse_new());
      if (t.text == "delete") {
        std::vector<std::uint32_t> kids{leaf()};
        if (at("[") && at("]", 1)) {
          kids.push_back(leaf());
          kids.push_back(leaf());
        }
        kids.push_back(parse_unary());
        return make("delete_expression", std::move(kids));
      }
    }
    return parse_postfix(parse_primary());
  }

  std::uint32_t parse_new() {
    std::vector<std::uint32_t> kids{leaf()};
    if (at("(")) kids.push_back(parse_argument_list());  // placement
    kids.push_back(parse_type_descriptor());
    if (at("(")) kids.push_back(parse_argument_list());
    else if (at("{")) kids.push_back(parse_initializer_list());
    return make("new_expression", std::move(kids));
  }

  std::uint32_t parse_argument() {
    const std::size_t save = pos_;
    const std::size_t arena_save = arena_.size();
    try {
      auto e = at("{") ? parse_initializer_list() : parse_assignment();
      if (at(",") || at(")")) return e;
    } catch (const Fail&) {
    }
    pos_ = save;
    arena_.resize(arena_save);
    auto type = parse_type_descriptor();  // offsetof(struct s, f), va_arg(ap, int)
    if (!at(",") && !at(")")) throw Fail{};
    return type;
  }

  std::uint32_t parse_argument_list() {
    std::vector<std::uint32_t> kids{expect("(")};
    while (!eof() && !at(")")) {
      kids.push_back(parse_argument());
      if (at(",")) kids.push_back(leaf());
      else if (!at(")")) throw Fail{};
    }
    kids.push_back(expect(")"));
    return make("argument_list", std::move(kids));
  }

  std::uint32_t parse_postfix(std::uint32_t e) {
    while (!eof()) {
      if (at("(")) {
        e = make("call_expression", {e, parse_argument_list()});
      } else if (at("[")) {
        auto open = leaf();
        auto index = at("{") ? parse_initializer_list() : parse_expression();
        e = make("subscript_expression", {e, open, index, expect("]")});
      } else if (at(".") || at("->")) {
        auto op = leaf();
        std::vector<std::uint32_t> kids{e, op};
        if (at("template")) kids.push_back(leaf());
        if (at("~")) kids.push_back(leaf());
        if (!at_ident()) throw Fail{};
        kids.push_back(leaf_as("field_identifier"));
        e = make("field_expression", std::move(kids));
      } else if (at("++") || at("--")) {
        e = make("update_expression", {e, leaf()});
      } else {
        break;
      }
    }
    return e;
  }

  std::uint32_t parse_primary() {
    if (eof()) throw Fail{};
    const Token& t = toks_[pos_];
    switch (t.kind) {
      case TokKind::Identifier: {
        if (cpp() && at("::", 1)) return parse_qualified_identifier();
        if (cpp() && at("<", 1)) {
          const std::size_t c = match_angle(pos_ + 1);
          if (c != std::string::npos && c + 1 < toks_.size() &&
              (toks_[c + 1].text == "(" || toks_[c + 1].text == "::" || toks_[c + 1].text == "{")) {
            auto name = leaf_as("identifier");
            auto args = make("template_argument_list", leaves_until(c, "type_identifier"));
            auto tmpl = make("template_function", {name, args});
            if (at("::")) {
              std::vector<std::uint32_t> parts{tmpl};
              while (at("::") && at_ident(1)) {
                parts.push_back(leaf());
                parts.push_back(leaf_as("identifier"));
              }
              return make("qualified_identifier", std::move(parts));
            }
            return tmpl;
          }
        }
        if (at_kind(TokKind::String, 1)) return parse_string();  // "a" MACRO "b"
        return leaf_as("identifier");
      }
      case TokKind::Number: return leaf();
      case TokKind::Char: return leaf();
      case TokKind::String: return parse_string();
      case TokKind::Keyword: {
        if (t.text == "true" || t.text == "false" || t.text == "nullptr" || t.text == "this")
          return leaf();
        if (t.text == "static_cast" || t.text == "dynamic_cast" || t.text == "reinterpret_cast" ||
            t.text == "const_cast") {
          std::vector<std::uint32_t> kids{leaf()};
          const std::size_t c = match_angle(pos_);
          if (!at("<") || c == std::string::npos) throw Fail{};
          auto targs = leaves_until(c, "type_identifier");
          kids.insert(kids.end(), targs.begin(), targs.end());
          kids.push_back(expect("("));
          kids.push_back(parse_expression());
          kids.push_back(expect(")"));
          return make("cast_expression", std::move(kids));
        }
        if (t.text == "typeid" || t.text == "decltype" || t.text == "__builtin_offsetof" ||
            t.text == "_Generic" || t.text == "noexcept") {
          auto kw = leaf();
          if (!at("(")) throw Fail{};
          const std::size_t c = match_close(pos_);
          if (c == std::string::npos) throw Fail{};
          std::vector<std::uint32_t> kids{kw};
          auto inner = leaves_until(c);
          kids.insert(kids.end(), inner.begin(), inner.end());
          return make("call_expression", std::move(kids));
        }
        if (is_primitive_type(t.text) && cpp() && (at("(", 1) || at("{", 1))) {
          // Functional cast: int(x), T{...}
          auto type = leaf();
          if (at("{")) return make("compound_literal_expression", {type, parse_initializer_list()});
          return make("call_expression", {type, parse_argument_list()});
        }
        throw Fail{};
      }
      case TokKind::Punct: {
        if (t.text == "(") {
          auto open = leaf();
          if (at("{")) {  // GNU statement expression
            auto body = parse_compound_statement();
            return make("statement_expression", {open, body, expect(")")});
          }
          auto inner = parse_expression();
          return make("parenthesized_expression", {open, inner, expect(")")});
        }
        if (t.text == "{") return parse_initializer_list();
        if (t.text == "::" && cpp()) return parse_qualified_identifier();
        if (t.text == "[" && cpp()) return parse_lambda();
        throw Fail{};
      }
      default: throw Fail{};
    }
  }

  std::uint32_t parse_qualified_identifier() {
    std::vector<std::uint32_t> parts;
    if (at("::")) parts.push_back(leaf());
    while (at_ident()) {
      const bool qualifier = at("::", 1);
      parts.push_back(leaf_as(qualifier ? "namespace_identifier" : "identifier"));
      if (cpp() && at("<") ) {
        const std::size_t c = match_angle(pos_);
        if (c != std::string::npos && c + 1 < toks_.size() &&
            (toks_[c + 1].text == "::" || toks_[c + 1].text == "(")) {
          parts.push_back(make("template_argument_list", leaves_until(c, "type_identifier")));
        }
      }
      if (at("::") && (at_ident(1) || at("~", 1))) {
        parts.push_back(leaf());
        if (at("~")) parts.push_back(leaf());
        continue;
      }
      break;
    }
    if (parts.empty()) throw Fail{};
    return parts.size() == 1 ? parts[0] : make("qualified_identifier", std::move(parts));
  }

  std::uint32_t parse_string() {
    std::vector<std::uint32_t> parts;
    while (at_kind(TokKind::String) || (at_ident() && at_kind(TokKind::String, 1) && !parts.empty()) ||
           (at_ident() && parts.empty() && at_kind(TokKind::String, 1))) {
      parts.push_back(at_ident() ? leaf_as("identifier") : leaf());
    }
    if (parts.size() == 1) return parts[0];
    return make("concatenated_string", std::move(parts));
  }

  std::uint32_t parse_lambda() {
    const std::size_t c = match_close(pos_);
    if (c == std::string::npos) throw Fail{};
    std::vector<std::uint32_t> kids{make("lambda_capture_specifier", leaves_until(c))};
    if (at("(")) kids.push_back(parse_parameter_list());
    while (!eof() && !at("{")) {
      if (at(";") || at(")")) throw Fail{};
      kids.push_back(type_leaf());
    }
    kids.push_back(parse_compound_statement());
    return make("lambda_expression", std::move(kids));
  }

  // ---- post-processing --------------------------------------------------
  void attach_comment(std::uint32_t root, const Token& c) {
    const std::uint32_t node = leaf_from(c, "comment", std::string(c.text));
    std::uint32_t cur = root;
    while (true) {
      auto& kids = arena_[cur].children;
      std::uint32_t into = kNone;
      for (auto k : kids) {
        const BNode& n = arena_[k];
        if (!n.children.empty() && n.begin <= c.begin && c.end <= n.end) {
          into = k;
          break;
        }
      }
      if (into == kNone) {
        auto pos = std::lower_bound(kids.begin(), kids.end(), c.begin,
                                    [&](std::uint32_t k, std::uint32_t b) { return arena_[k].begin < b; });
        kids.insert(pos, node);
        return;
      }
      cur = into;
    }
  }

  SyntaxTree compact(std::uint32_t root, std::shared_ptr<const std::string> owned) {
    std::vector<Node> nodes;
    nodes.reserve(arena_.size());
    struct Frame {
      std::uint32_t b;
      NodeId parent;
    };
    std::vector<Frame> stack{{root, kNoNode}};
    while (!stack.empty()) {
      const Frame f = stack.back();
      stack.pop_back();
      const BNode& b = arena_[f.b];
      const NodeId id = static_cast<NodeId>(nodes.size());
      Node n;
      n.kind = b.kind;
      n.label = b.label;
      n.span = {b.begin, b.end};
      n.line_begin = b.line_begin;
      n.line_end = b.line_end;
      n.parent = f.parent;
      nodes.push_back(std::move(n));
      if (f.parent != kNoNode) nodes[f.parent].children.push_back(id);
      for (auto it = b.children.rbegin(); it != b.children.rend(); ++it) stack.push_back({*it, id});
    }
    return SyntaxTree(lang_, std::move(owned), std::move(nodes));
  }

  std::string_view src_;
  Language lang_;
  std::vector<Token> toks_;
  std::vector<Token> comments_;
  std::vector<std::uint32_t> line_starts_;
  std::vector<BNode> arena_;
  std::size_t pos_ = 0;
  bool in_record_ = false;
};

}  // namespace

SyntaxTree parse_tree(std::string_view text, Language lang) {
  auto owned = std::make_shared<const std::string>(text);
  Parser parser(*owned, lang);
  return parser.run(owned);
}

}  // namespace vfc::syntax::detail
