#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vfc::syntax {

enum class Language : std::uint8_t { C, Cpp, Unknown };

std::string_view to_string(Language lang);
/// "c", "cpp", "c++", "cxx" (case-insensitive); anything else is Unknown.
Language language_from_name(std::string_view name);
/// Maps file extensions: .c/.h to C; .cc/.cpp/.cxx/.c++/.hpp/.hh/.hxx/.inl to Cpp.
Language language_from_path(std::string_view path);
/// True when a grammar is registered for `lang`.
bool has_grammar(Language lang);

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct ByteRange {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  bool contains(ByteRange other) const { return begin <= other.begin && other.end <= end; }
  friend bool operator==(const ByteRange&, const ByteRange&) = default;
};

/// A CST node. Leaves carry their source text in `label` when the text is
/// meaningful for matching (identifiers, literals, primitive types);
/// punctuation and keyword leaves use the token text as `kind`.
struct Node {
  std::string kind;
  std::string label;
  ByteRange span;
  int line_begin = 1;  // 1-based, inclusive
  int line_end = 1;
  NodeId parent = kNoNode;
  std::vector<NodeId> children;

  bool is_leaf() const { return children.empty(); }
};

/// Concrete syntax tree. Node ids are assigned in pre-order; the root is 0.
/// Spans are absolute byte offsets into `source()`, so subtrees extracted
/// with `subtree()` keep file coordinates.
class SyntaxTree {
 public:
  SyntaxTree() = default;
  SyntaxTree(Language lang, std::shared_ptr<const std::string> source, std::vector<Node> nodes);

  Language language() const { return language_; }
  const std::string& source() const { return *source_; }
  const std::shared_ptr<const std::string>& shared_source() const { return source_; }

  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }
  NodeId root() const { return 0; }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  const std::vector<Node>& nodes() const { return nodes_; }

  std::string_view text(NodeId id) const;
  bool has_errors() const;
  std::size_t count_kind(std::string_view kind) const;
  std::vector<NodeId> find_all(std::string_view kind) const;
  std::vector<NodeId> post_order() const;
  /// Height of a leaf is 1.
  int height(NodeId id) const;

  /// Copy of the subtree rooted at `id` (re-numbered, same source).
  SyntaxTree subtree(NodeId id) const;

  /// Indented s-expression-like dump, one node per line, for fixtures.
  std::string dump() const;

 private:
  Language language_ = Language::Unknown;
  std::shared_ptr<const std::string> source_ = std::make_shared<const std::string>();
  std::vector<Node> nodes_;
};

/// Parses a whole file. Error-tolerant: unparseable regions become "ERROR"
/// nodes. Throws CapabilityError for languages without a grammar.
SyntaxTree parse_source(std::string_view text, Language lang);

/// Byte ranges of all comment nodes in source order.
std::vector<ByteRange> comment_ranges(const SyntaxTree& tree);

/// Removes comments from one file version. Lines that become blank because
/// of the removal are deleted; string literals are untouched.
std::string strip_comments(std::string_view text, Language lang);
std::pair<std::string, std::string> strip_comments(std::string_view pre, std::string_view post,
                                                   Language lang);

struct LineRange {
  int begin = 0;  // 1-based inclusive
  int end = 0;
  friend bool operator==(const LineRange&, const LineRange&) = default;
};

using StatementId = std::uint32_t;

/// One statement of a function body. Control headers (if/for/while/do/
/// switch conditions and loop-like macros) are their own entries.
struct StatementEntry {
  StatementId id = 0;
  NodeId node = kNoNode;
  std::string kind;
  std::vector<ByteRange> segments;     // bytes that belong to this statement
  std::vector<LineRange> line_ranges;  // lines covered by `segments`
  std::string text;
  std::set<std::string> reads;
  std::set<std::string> writes;
  std::vector<StatementId> enclosure_chain;  // innermost first
  bool is_control_header = false;

  int line_begin() const { return line_ranges.front().begin; }
  int line_end() const { return line_ranges.back().end; }
  std::vector<int> lines() const;
  bool covers(ByteRange r) const;
};

struct StatementIR {
  std::vector<StatementEntry> statements;

  std::size_t size() const { return statements.size(); }
  const StatementEntry& operator[](StatementId id) const { return statements.at(id); }
};

/// Builds the statement IR of the function rooted at `function` (a
/// function_definition or compound_statement node).
StatementIR build_statement_ir(const SyntaxTree& tree, NodeId function);
/// Convenience: the first function_definition in `tree` (empty IR if none).
StatementIR build_statement_ir(const SyntaxTree& tree);

/// A function definition found in a file.
struct FunctionInfo {
  std::string name;       // qualified with enclosing classes/namespaces
  std::string signature;  // name plus collapsed parameter list
  NodeId node = kNoNode;
  LineRange lines;
};

std::vector<FunctionInfo> list_functions(const SyntaxTree& tree);

}  // namespace vfc::syntax
