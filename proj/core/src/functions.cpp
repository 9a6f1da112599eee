#include "vfc/functions.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "vfc/text.hpp"

namespace vfc::syntax {

namespace {

std::string squeeze(std::string_view s) {
  std::string out;
  for (char c : collapse_whitespace(s))
    if (c != ' ') out += c;
  return out;
}

// Name text of a function_declarator's first child, without whitespace.
std::string declarator_name(const SyntaxTree& t, NodeId decl) {
  const Node& d = t.node(decl);
  if (d.children.empty()) return {};
  return squeeze(t.text(d.children[0]));
}

NodeId find_child(const SyntaxTree& t, NodeId id, std::string_view kind) {
  for (NodeId c : t.node(id).children)
    if (t.node(c).kind == kind) return c;
  return kNoNode;
}

std::string scope_name(const SyntaxTree& t, NodeId id) {
  for (NodeId c : t.node(id).children) {
    const Node& n = t.node(c);
    if (n.kind == "namespace_identifier" || n.kind == "type_identifier" || n.kind == "identifier")
      return n.label;
    if (n.kind == "qualified_type") return squeeze(t.text(c));
  }
  return {};
}

}  // namespace

std::vector<FunctionInfo> list_functions(const SyntaxTree& tree) {
  std::vector<FunctionInfo> out;
  if (tree.empty()) return out;
  std::function<void(NodeId, const std::string&)> walk = [&](NodeId id, const std::string& prefix) {
    const Node& n = tree.node(id);
    if (n.kind == "function_definition") {
      const NodeId decl = find_child(tree, id, "function_declarator");
      if (decl == kNoNode || find_child(tree, id, "compound_statement") == kNoNode) return;
      FunctionInfo f;
      f.name = prefix + declarator_name(tree, decl);
      const NodeId params = find_child(tree, decl, "parameter_list");
      f.signature = f.name + (params == kNoNode ? std::string() : collapse_whitespace(tree.text(params)));
      f.node = id;
      f.lines = {n.line_begin, n.line_end};
      out.push_back(std::move(f));
      return;
    }
    std::string inner = prefix;
    if (n.kind == "namespace_definition" || n.kind == "class_specifier" || n.kind == "struct_specifier" ||
        n.kind == "union_specifier") {
      const std::string s = scope_name(tree, id);
      if (!s.empty()) inner += s + "::";
    }
    if (n.kind == "compound_statement" || n.kind == "ERROR" || n.kind == "enumerator_list") return;
    for (NodeId c : n.children) walk(c, inner);
  };
  walk(tree.root(), "");
  return out;
}

std::string_view to_string(FileFallback f) {
  switch (f) {
    case FileFallback::None: return "none";
    case FileFallback::Binary: return "binary";
    case FileFallback::UnsupportedLanguage: return "unsupported-language";
    case FileFallback::MissingSnapshot: return "missing-snapshot";
  }
  return "none";
}

FileAnalysis analyze_file(const diff::FileDiff& file, const std::optional<std::string>& pre,
                          const std::optional<std::string>& post) {
  FileAnalysis fa;
  fa.raw = file;
  fa.language = language_from_path(file.path());
  if (file.is_binary) {
    fa.fallback = FileFallback::Binary;
    return fa;
  }
  if (!has_grammar(fa.language)) {
    fa.fallback = FileFallback::UnsupportedLanguage;
    return fa;
  }
  if (!pre || !post) {
    fa.fallback = FileFallback::MissingSnapshot;
    return fa;
  }
  fa.pre = strip_comments(*pre, fa.language);
  fa.post = strip_comments(*post, fa.language);
  fa.stripped = diff::compute_unified_diff(fa.pre, fa.post, 0);
  fa.stripped.old_path = file.old_path;
  fa.stripped.new_path = file.new_path;
  if (fa.stripped.hunks.empty()) return fa;

  std::set<int> deleted, added;
  for (const auto& h : fa.stripped.hunks)
    for (const auto& l : h.lines) {
      if (l.kind == diff::LineKind::Deleted) deleted.insert(*l.old_lineno);
      if (l.kind == diff::LineKind::Added) added.insert(*l.new_lineno);
    }
  auto touches = [](const std::set<int>& lines, LineRange r) {
    auto it = lines.lower_bound(r.begin);
    return it != lines.end() && *it <= r.end;
  };

  const SyntaxTree pre_tree = parse_source(fa.pre, fa.language);
  const SyntaxTree post_tree = parse_source(fa.post, fa.language);
  const auto pre_fns = list_functions(pre_tree);
  const auto post_fns = list_functions(post_tree);

  // Pair functions: exact signature first, then name, in source order.
  std::vector<int> partner(post_fns.size(), -1);
  std::vector<bool> used(pre_fns.size(), false);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < post_fns.size(); ++j) {
      if (partner[j] >= 0) continue;
      for (std::size_t i = 0; i < pre_fns.size(); ++i) {
        if (used[i]) continue;
        const bool same = pass == 0 ? pre_fns[i].signature == post_fns[j].signature
                                    : pre_fns[i].name == post_fns[j].name;
        if (same) {
          partner[j] = static_cast<int>(i);
          used[i] = true;
          break;
        }
      }
    }
  }

  std::vector<std::pair<int, int>> pairs;  // (pre index, post index), -1 absent
  for (std::size_t j = 0; j < post_fns.size(); ++j) pairs.emplace_back(partner[j], static_cast<int>(j));
  for (std::size_t i = 0; i < pre_fns.size(); ++i)
    if (!used[i]) pairs.emplace_back(static_cast<int>(i), -1);
  auto first_line = [&](const std::pair<int, int>& p) {
    return p.second >= 0 ? post_fns[p.second].lines.begin : pre_fns[p.first].lines.begin;
  };
  std::stable_sort(pairs.begin(), pairs.end(),
                   [&](const auto& a, const auto& b) { return first_line(a) < first_line(b); });

  std::vector<LineRange> pre_cover, post_cover;
  for (auto [i, j] : pairs) {
    const bool changed = (i >= 0 && touches(deleted, pre_fns[i].lines)) || (j >= 0 && touches(added, post_fns[j].lines));
    if (!changed) continue;
    FunctionPair fp;
    fp.path = file.path();
    fp.name = j >= 0 ? post_fns[j].name : pre_fns[i].name;
    if (i >= 0) {
      fp.pre_tree = pre_tree.subtree(pre_fns[i].node);
      fp.pre_ir = build_statement_ir(*fp.pre_tree, 0);
      fp.pre_lines = pre_fns[i].lines;
      pre_cover.push_back(pre_fns[i].lines);
    }
    if (j >= 0) {
      fp.post_tree = post_tree.subtree(post_fns[j].node);
      fp.post_ir = build_statement_ir(*fp.post_tree, 0);
      fp.post_lines = post_fns[j].lines;
      post_cover.push_back(post_fns[j].lines);
    }
    fa.functions.push_back(std::move(fp));
  }

  auto inside = [](const std::vector<LineRange>& cover, int line) {
    return std::any_of(cover.begin(), cover.end(), [&](LineRange r) { return r.begin <= line && line <= r.end; });
  };
  for (const auto& h : fa.stripped.hunks)
    for (const auto& l : h.lines) {
      if (l.kind == diff::LineKind::Deleted && !inside(pre_cover, *l.old_lineno)) fa.residual.push_back(l);
      if (l.kind == diff::LineKind::Added && !inside(post_cover, *l.new_lineno)) fa.residual.push_back(l);
    }
  return fa;
}

std::vector<FileAnalysis> changed_functions(const diff::CommitDiff& diff, const corpus::SnapshotProvider& snapshots,
                                            const std::string& repo, const std::string& sha) {
  std::vector<FileAnalysis> out;
  for (const auto& file : diff.files) {
    std::optional<std::string> pre, post;
    const bool fetchable = !file.is_binary && has_grammar(language_from_path(file.path()));
    if (fetchable) {
      pre = file.is_added() ? std::optional<std::string>("")
                            : snapshots.fetch(repo, sha, corpus::SnapshotSide::Pre, file.old_path);
      post = file.is_deleted() ? std::optional<std::string>("")
                               : snapshots.fetch(repo, sha, corpus::SnapshotSide::Post, file.new_path);
    }
    out.push_back(analyze_file(file, pre, post));
  }
  return out;
}

}  // namespace vfc::syntax
