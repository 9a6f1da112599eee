#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vfc/diff.hpp"
#include "vfc/snapshot.hpp"
#include "vfc/syntax.hpp"

namespace vfc::syntax {

/// A function touched by a commit. Trees are subtrees of the whole-file
/// parse, so spans and line numbers stay in file coordinates.
struct FunctionPair {
  std::string name;
  std::string path;
  std::optional<SyntaxTree> pre_tree;
  std::optional<SyntaxTree> post_tree;
  std::optional<StatementIR> pre_ir;
  std::optional<StatementIR> post_ir;
  std::optional<LineRange> pre_lines;
  std::optional<LineRange> post_lines;
};

enum class FileFallback { None, Binary, UnsupportedLanguage, MissingSnapshot };

std::string_view to_string(FileFallback f);

/// Per-file result of locating changed functions.
struct FileAnalysis {
  diff::FileDiff raw;               // the file's diff as it appeared in the commit
  Language language = Language::Unknown;
  FileFallback fallback = FileFallback::None;
  std::string pre;                  // comment-stripped versions (empty on fallback)
  std::string post;
  diff::FileDiff stripped;          // regenerated from pre/post, no context
  std::vector<FunctionPair> functions;
  std::vector<diff::DiffLine> residual;  // changed lines outside every changed function
};

/// Works on already-fetched contents; nullopt marks a missing snapshot.
FileAnalysis analyze_file(const diff::FileDiff& file, const std::optional<std::string>& pre,
                          const std::optional<std::string>& post);

/// Fetches snapshots for every file of `diff` and analyses it.
std::vector<FileAnalysis> changed_functions(const diff::CommitDiff& diff, const corpus::SnapshotProvider& snapshots,
                                            const std::string& repo, const std::string& sha);

}  // namespace vfc::syntax
