#include "vfc/syntax.hpp"

#include <algorithm>
#include <functional>

#include "parser.hpp"
#include "vfc/error.hpp"
#include "vfc/text.hpp"

namespace vfc::syntax {

std::string_view to_string(Language lang) {
  switch (lang) {
    case Language::C: return "c";
    case Language::Cpp: return "cpp";
    default: return "unknown";
  }
}

Language language_from_name(std::string_view name) {
  const std::string n = to_lower(trim(name));
  if (n == "c") return Language::C;
  if (n == "cpp" || n == "c++" || n == "cxx" || n == "cc") return Language::Cpp;
  return Language::Unknown;
}

Language language_from_path(std::string_view path) {
  const auto dot = path.rfind('.');
  const auto slash = path.rfind('/');
  if (dot == std::string_view::npos || (slash != std::string_view::npos && dot < slash)) return Language::Unknown;
  const std::string ext = to_lower(path.substr(dot + 1));
  if (ext == "c" || ext == "h") return Language::C;
  if (ext == "cc" || ext == "cpp" || ext == "cxx" || ext == "c++" || ext == "hpp" || ext == "hh" ||
      ext == "hxx" || ext == "inl" || ext == "ipp")
    return Language::Cpp;
  return Language::Unknown;
}

bool has_grammar(Language lang) { return lang == Language::C || lang == Language::Cpp; }

SyntaxTree::SyntaxTree(Language lang, std::shared_ptr<const std::string> source, std::vector<Node> nodes)
    : language_(lang), source_(std::move(source)), nodes_(std::move(nodes)) {}

std::string_view SyntaxTree::text(NodeId id) const {
  const Node& n = node(id);
  return std::string_view(*source_).substr(n.span.begin, n.span.end - n.span.begin);
}

bool SyntaxTree::has_errors() const { return count_kind("ERROR") > 0; }

std::size_t SyntaxTree::count_kind(std::string_view kind) const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [&](const Node& n) { return n.kind == kind; }));
}

std::vector<NodeId> SyntaxTree::find_all(std::string_view kind) const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].kind == kind) out.push_back(i);
  return out;
}

std::vector<NodeId> SyntaxTree::post_order() const {
  std::vector<NodeId> out;
  if (nodes_.empty()) return out;
  out.reserve(nodes_.size());
  std::vector<std::pair<NodeId, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto& [id, next] = stack.back();
    const auto& kids = nodes_[id].children;
    if (next < kids.size()) {
      const NodeId child = kids[next++];
      stack.emplace_back(child, 0);
    } else {
      out.push_back(id);
      stack.pop_back();
    }
  }
  return out;
}

int SyntaxTree::height(NodeId id) const {
  int h = 1;
  for (NodeId c : node(id).children) h = std::max(h, height(c) + 1);
  return h;
}

SyntaxTree SyntaxTree::subtree(NodeId id) const {
  // Pre-order numbering makes a subtree a contiguous id range.
  NodeId last = id;
  std::function<void(NodeId)> walk = [&](NodeId n) {
    last = std::max(last, n);
    for (NodeId c : nodes_[n].children) walk(c);
  };
  walk(id);
  std::vector<Node> out(nodes_.begin() + id, nodes_.begin() + last + 1);
  for (auto& n : out) {
    n.parent = n.parent == kNoNode || n.parent < id ? kNoNode : n.parent - id;
    for (auto& c : n.children) c -= id;
  }
  out.front().parent = kNoNode;
  return SyntaxTree(language_, source_, std::move(out));
}

std::string SyntaxTree::dump() const {
  std::string out;
  if (nodes_.empty()) return out;
  std::function<void(NodeId, int)> walk = [&](NodeId id, int depth) {
    const Node& n = nodes_[id];
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += n.kind;
    if (!n.label.empty() && n.kind != "comment") {
      out += " \"";
      out += n.label;
      out += '"';
    }
    out += " [" + std::to_string(n.line_begin) + "-" + std::to_string(n.line_end) + "]\n";
    for (NodeId c : n.children) walk(c, depth + 1);
  };
  walk(0, 0);
  return out;
}

SyntaxTree parse_source(std::string_view text, Language lang) {
  if (!has_grammar(lang)) throw CapabilityError("no grammar registered for language '" +
                                                std::string(to_string(lang)) + "'");
  return detail::parse_tree(text, lang);
}

std::vector<ByteRange> comment_ranges(const SyntaxTree& tree) {
  std::vector<ByteRange> out;
  for (const auto& n : tree.nodes())
    if (n.kind == "comment") out.push_back(n.span);
  std::sort(out.begin(), out.end(), [](ByteRange a, ByteRange b) { return a.begin < b.begin; });
  return out;
}

std::string strip_comments(std::string_view text, Language lang) {
  const auto ranges = comment_ranges(parse_source(text, lang));
  if (ranges.empty()) return std::string(text);

  // Rebuild line by line; a line that lost comment bytes has trailing
  // blanks trimmed and is dropped when nothing but whitespace remains.
  std::string out;
  out.reserve(text.size());
  std::string line;
  bool touched = false;
  std::size_t r = 0;
  auto flush = [&](bool newline) {
    if (touched) {
      while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) line.pop_back();
      if (line.empty()) {
        touched = false;
        return;
      }
    }
    out += line;
    if (newline) out += '\n';
    line.clear();
    touched = false;
  };
  for (std::size_t i = 0; i < text.size();) {
    if (r < ranges.size() && i == ranges[r].begin) {
      // A comment may span lines; each spanned line counts as touched.
      for (std::size_t k = ranges[r].begin; k < ranges[r].end; ++k) {
        if (text[k] == '\n') {
          touched = true;
          flush(true);
        }
      }
      touched = true;
      i = ranges[r].end;
      ++r;
      continue;
    }
    if (text[i] == '\n') {
      flush(true);
    } else {
      line += text[i];
    }
    ++i;
  }
  if (!line.empty() || touched) flush(false);
  return out;
}

std::pair<std::string, std::string> strip_comments(std::string_view pre, std::string_view post, Language lang) {
  return {strip_comments(pre, lang), strip_comments(post, lang)};
}

}  // namespace vfc::syntax
