#include <algorithm>
#include <unordered_set>

#include "vfc/syntax.hpp"

namespace vfc::syntax {

std::vector<int> StatementEntry::lines() const {
  std::vector<int> out;
  for (const auto& r : line_ranges)
    for (int l = r.begin; l <= r.end; ++l) out.push_back(l);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool StatementEntry::covers(ByteRange r) const {
  return std::any_of(segments.begin(), segments.end(), [&](ByteRange s) { return s.contains(r); });
}

namespace {

const std::unordered_set<std::string_view> kIgnoredLeafKinds = {
    "type_identifier", "field_identifier", "namespace_identifier", "statement_identifier", "primitive_type",
};

// Syntactic read/write extraction over one statement's nodes.
class Effects {
 public:
  Effects(const SyntaxTree& tree, StatementEntry& entry) : t_(tree), e_(entry) {}

  void collect(NodeId id) {
    const Node& n = t_.node(id);
    if (n.is_leaf()) {
      if (n.kind == "identifier") e_.reads.insert(n.label);
      return;
    }
    const auto& k = n.kind;
    const auto& c = n.children;
    if (k == "ERROR" || k == "type_descriptor" || k == "template_argument_list" || k == "attribute_specifier" ||
        k == "struct_specifier" || k == "union_specifier" || k == "enum_specifier" || k == "class_specifier" ||
        k == "qualified_type" || k == "decltype" || k == "comment")
      return;
    if (k == "assignment_expression") {
      const bool compound = t_.node(c[1]).kind != "=";
      write_target(c[0], compound);
      for (std::size_t i = 2; i < c.size(); ++i) collect(c[i]);
      return;
    }
    if (k == "update_expression") {
      for (NodeId ch : c)
        if (!is_op(ch)) write_target(ch, true);
      return;
    }
    if (k == "call_expression") {
      const Node& callee = t_.node(c[0]);
      if (callee.kind != "identifier" && callee.kind != "qualified_identifier" &&
          callee.kind != "template_function" && !callee.is_leaf())
        collect(c[0]);
      for (std::size_t i = 1; i < c.size(); ++i) {
        const Node& args = t_.node(c[i]);
        if (args.kind != "argument_list") {
          collect(c[i]);
          continue;
        }
        for (NodeId a : args.children) {
          const Node& arg = t_.node(a);
          if (arg.kind == "pointer_expression" && t_.node(arg.children[0]).kind == "&")
            write_target(arg.children[1], true);
          else
            collect(a);
        }
      }
      return;
    }
    if (k == "field_expression") {
      collect(c[0]);
      return;
    }
    if (k == "qualified_identifier") {
      const Node& last = t_.node(c.back());
      if (last.kind == "identifier") e_.reads.insert(last.label);
      return;
    }
    if (k == "init_declarator") {
      declarator(c[0], true);
      for (std::size_t i = 1; i < c.size(); ++i) collect(c[i]);
      return;
    }
    if (k == "declaration" || k == "field_declaration" || k == "type_definition") {
      for (NodeId ch : c) {
        const auto& ck = t_.node(ch).kind;
        if (ck == "init_declarator") collect(ch);
        else if (is_declarator_kind(ck)) declarator(ch, false);
      }
      return;
    }
    for (NodeId ch : c) collect(ch);
  }

  // Declarator of a range-for or a parameter-like binding: always written.
  void bound_declaration(NodeId id) {
    for (NodeId ch : t_.node(id).children) {
      const auto& ck = t_.node(ch).kind;
      if (ck == "init_declarator") collect(ch);
      else if (is_declarator_kind(ck)) declarator(ch, true);
    }
  }

 private:
  static bool is_declarator_kind(std::string_view k) {
    return k == "identifier" || k == "pointer_declarator" || k == "reference_declarator" ||
           k == "array_declarator" || k == "parenthesized_declarator" || k == "bitfield_declarator";
  }

  bool is_op(NodeId id) const {
    const auto& k = t_.node(id).kind;
    return k == "++" || k == "--";
  }

  void declarator(NodeId id, bool write) {
    const Node& n = t_.node(id);
    if (n.kind == "identifier") {
      if (write) e_.writes.insert(n.label);
      return;
    }
    if (n.kind == "pointer_declarator" || n.kind == "reference_declarator") {
      declarator(n.children.back(), write);
      return;
    }
    if (n.kind == "parenthesized_declarator") {
      declarator(n.children[1], write);
      return;
    }
    if (n.kind == "array_declarator") {
      declarator(n.children[0], write);
      for (std::size_t i = 1; i < n.children.size(); ++i)
        if (!t_.node(n.children[i]).is_leaf() || t_.node(n.children[i]).kind == "identifier")
          collect(n.children[i]);
      return;
    }
    if (n.kind == "bitfield_declarator") {
      declarator(n.children[0], write);
      return;
    }
    if (n.kind == "init_declarator") collect(id);
    // function_declarator, qualified names: prototypes, nothing written.
  }

  void write_target(NodeId id, bool also_read) {
    const Node& n = t_.node(id);
    if (n.kind == "identifier") {
      e_.writes.insert(n.label);
      if (also_read) e_.reads.insert(n.label);
      return;
    }
    if (n.kind == "qualified_identifier") {
      const Node& last = t_.node(n.children.back());
      if (last.kind == "identifier") {
        e_.writes.insert(last.label);
        if (also_read) e_.reads.insert(last.label);
      }
      return;
    }
    if (n.kind == "field_expression") {
      write_target(n.children[0], also_read);
      return;
    }
    if (n.kind == "subscript_expression") {
      for (std::size_t i = 1; i < n.children.size(); ++i) collect(n.children[i]);
      write_target(n.children[0], also_read);
      return;
    }
    if (n.kind == "pointer_expression") {
      if (t_.node(n.children[0]).kind == "*") {
        write_target(n.children[1], also_read);
      } else {
        collect(id);
      }
      return;
    }
    if (n.kind == "parenthesized_expression") {
      write_target(n.children[1], also_read);
      return;
    }
    if (n.kind == "cast_expression") {
      write_target(n.children.back(), also_read);
      return;
    }
    collect(id);
  }

  const SyntaxTree& t_;
  StatementEntry& e_;
};

class Builder {
 public:
  explicit Builder(const SyntaxTree& tree) : t_(tree) {}

  void block(NodeId id, const std::vector<StatementId>& chain) {
    for (NodeId c : t_.node(id).children) statement(c, chain);
  }

  void statement(NodeId id, const std::vector<StatementId>& chain) {
    const Node& n = t_.node(id);
    const auto& k = n.kind;
    const auto& c = n.children;
    if (k == "{" || k == "}" || k == "comment" || (k == "ERROR" && n.label == "MISSING")) return;
    if (k == "compound_statement" || k == "declaration_list") {
      block(id, chain);
      return;
    }
    if (k == "expression_statement" && c.size() == 1 && t_.node(c[0]).kind == ";") return;

    if (k == "if_statement") {
      std::size_t cond = 1;
      while (cond < c.size() && t_.node(c[cond]).kind != "condition_clause") ++cond;
      const auto hdr = header(id, k, {{c.front(), c[cond]}}, std::vector<NodeId>(c.begin(), c.begin() + cond + 1), chain);
      const auto inner = nest(hdr, chain);
      for (std::size_t i = cond + 1; i < c.size(); ++i) {
        const Node& ch = t_.node(c[i]);
        if (ch.kind == "else_clause") {
          for (std::size_t j = 1; j < ch.children.size(); ++j) statement(ch.children[j], inner);
        } else {
          statement(c[i], inner);
        }
      }
      return;
    }
    if (k == "while_statement" || k == "switch_statement") {
      const auto hdr = header(id, k, {{c[0], c[1]}}, {c[0], c[1]}, chain);
      statement(c[2], nest(hdr, chain));
      return;
    }
    if (k == "for_statement" || k == "for_range_loop") {
      const std::size_t body = c.size() - 1;
      std::vector<NodeId> head(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(body));
      const auto hdr = header(id, k, {{c.front(), c[body - 1]}}, head, chain);
      statement(c[body], nest(hdr, chain));
      return;
    }
    if (k == "do_statement") {
      // "do" and the trailing "while (cond);" form one header entry.
      const auto hdr = header(id, k, {{c[0], c[0]}, {c[2], c.back()}}, {c[2], c[3]}, chain);
      statement(c[1], nest(hdr, chain));
      return;
    }
    if (k == "macro_loop") {
      const auto hdr = header(id, k, {{c[0], c[0]}}, {c[0]}, chain);
      statement(c[1], nest(hdr, chain));
      return;
    }
    if (k == "labeled_statement") {
      simple(id, k, {{c[0], c[1]}}, {}, chain);
      for (std::size_t i = 2; i < c.size(); ++i) statement(c[i], chain);
      return;
    }
    if (k == "try_statement") {
      for (NodeId ch : c) {
        const Node& cn = t_.node(ch);
        if (cn.kind == "compound_statement") block(ch, chain);
        if (cn.kind == "catch_clause") block(cn.children.back(), chain);
      }
      return;
    }
    const bool opaque = k == "ERROR" || starts_with_preproc(k) || k == "asm_statement";
    simple(id, k, {{id, id}}, opaque ? std::vector<NodeId>{} : std::vector<NodeId>{id}, chain);
  }

  StatementIR finish() {
    StatementIR ir;
    ir.statements = std::move(entries_);
    return ir;
  }

 private:
  static bool starts_with_preproc(std::string_view k) { return k.substr(0, 7) == "preproc"; }

  static std::vector<StatementId> nest(StatementId hdr, const std::vector<StatementId>& chain) {
    std::vector<StatementId> out{hdr};
    out.insert(out.end(), chain.begin(), chain.end());
    return out;
  }

  StatementId simple(NodeId id, const std::string& kind, std::vector<std::pair<NodeId, NodeId>> segs,
                     std::vector<NodeId> effect_nodes, const std::vector<StatementId>& chain) {
    return add(id, kind, std::move(segs), std::move(effect_nodes), chain, false);
  }

  StatementId header(NodeId id, const std::string& kind, std::vector<std::pair<NodeId, NodeId>> segs,
                     std::vector<NodeId> effect_nodes, const std::vector<StatementId>& chain) {
    return add(id, kind, std::move(segs), std::move(effect_nodes), chain, true);
  }

  StatementId add(NodeId id, const std::string& kind, std::vector<std::pair<NodeId, NodeId>> segs,
                  std::vector<NodeId> effect_nodes, const std::vector<StatementId>& chain, bool control) {
    StatementEntry e;
    e.id = static_cast<StatementId>(entries_.size());
    e.node = id;
    e.kind = kind;
    e.is_control_header = control;
    e.enclosure_chain = chain;
    const std::string& src = t_.source();
    for (auto [first, last] : segs) {
      const Node& a = t_.node(first);
      const Node& b = t_.node(last);
      e.segments.push_back({a.span.begin, b.span.end});
      e.line_ranges.push_back({a.line_begin, b.line_end});
      if (!e.text.empty()) e.text += ' ';
      e.text += src.substr(a.span.begin, b.span.end - a.span.begin);
    }
    Effects fx(t_, e);
    for (NodeId n : effect_nodes) {
      if (kind == "for_range_loop" && t_.node(n).kind == "declaration")
        fx.bound_declaration(n);
      else
        fx.collect(n);
    }
    entries_.push_back(std::move(e));
    return entries_.back().id;
  }

  const SyntaxTree& t_;
  std::vector<StatementEntry> entries_;
};

}  // namespace

StatementIR build_statement_ir(const SyntaxTree& tree, NodeId function) {
  if (tree.empty() || function == kNoNode) return {};
  Builder b(tree);
  const Node& fn = tree.node(function);
  if (fn.kind == "function_definition") {
    for (NodeId c : fn.children)
      if (tree.node(c).kind == "compound_statement") b.block(c, {});
  } else {
    b.block(function, {});
  }
  return b.finish();
}

StatementIR build_statement_ir(const SyntaxTree& tree) {
  if (tree.empty()) return {};
  const auto fns = tree.find_all("function_definition");
  if (!fns.empty()) return build_statement_ir(tree, fns.front());
  return build_statement_ir(tree, tree.root());
}

}  // namespace vfc::syntax
