#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vfc {

class Tokenizer;

namespace diff {

enum class LineKind : std::uint8_t { Added, Deleted, Context, Header, Message };

std::string_view to_string(LineKind kind);

/// One line of a diff. For Added/Deleted/Context lines `text` excludes the
/// one-character prefix; Header and Message lines hold the full line.
struct DiffLine {
  LineKind kind = LineKind::Context;
  std::string text;
  std::optional<int> old_lineno;
  std::optional<int> new_lineno;

  bool is_change() const { return kind == LineKind::Added || kind == LineKind::Deleted; }
  friend bool operator==(const DiffLine&, const DiffLine&) = default;
};

/// A contiguous change region. `lines` may contain Header entries for
/// "\ No newline at end of file" markers and stray trailer lines; those do
/// not count towards old_count/new_count.
struct Hunk {
  int old_start = 0;
  int old_count = 0;
  int new_start = 0;
  int new_count = 0;
  std::string section;  // text after the closing "@@", verbatim
  std::vector<DiffLine> lines;

  /// "@@ -a,b +c,d @@section" recomputed from the counts, git style.
  std::string header() const;
  friend bool operator==(const Hunk&, const Hunk&) = default;
};

struct FileDiff {
  std::string old_path;  // "/dev/null" for added files
  std::string new_path;  // "/dev/null" for deleted files
  bool is_binary = false;
  std::vector<DiffLine> header;  // verbatim lines preceding the first hunk
  std::vector<Hunk> hunks;

  /// The path a reader would call "the file": new_path unless deleted.
  const std::string& path() const;
  bool is_added() const { return old_path == "/dev/null"; }
  bool is_deleted() const { return new_path == "/dev/null"; }
  friend bool operator==(const FileDiff&, const FileDiff&) = default;
};

struct CommitDiff {
  std::optional<std::string> message;
  std::vector<DiffLine> preamble;  // Header lines before the first file
  std::vector<FileDiff> files;
  bool lossy_decoding = false;
  bool missing_final_newline = false;
  friend bool operator==(const CommitDiff&, const CommitDiff&) = default;
};

/// Parses git-flavoured unified diff text. Throws ParseError when a hunk
/// body disagrees with its header counts.
CommitDiff parse_unified_diff(std::string_view text,
                              std::optional<std::string> message = std::nullopt);

/// Inverse of parse_unified_diff (the message is not part of the diff text).
/// Throws RenderError naming the hunk when counts do not match its body.
std::string render_unified_diff(const CommitDiff& diff);
std::string render_file_diff(const FileDiff& file);

/// Checks the count invariant; throws RenderError on violation.
void validate_hunk(const Hunk& hunk, std::string_view where);

/// All lines of the rendered representation in order: message lines,
/// preamble, per file its header lines, each hunk header, then hunk lines.
std::vector<DiffLine> flatten(const CommitDiff& diff);

/// Line-level shortest edit script between `pre` and `post` as a FileDiff
/// with `context_n` lines of context. Paths and header lines are left empty.
FileDiff compute_unified_diff(std::string_view pre, std::string_view post, int context_n = 3);

/// Standard "diff --git", "---", "+++" header lines for a file pair.
std::vector<DiffLine> make_file_header(const std::string& old_path, const std::string& new_path);

/// Applies `file` to `pre`. Throws DataError when context or deleted lines
/// do not match.
std::string apply_file_diff(std::string_view pre, const FileDiff& file);

/// One row of a full-file alignment between two versions.
struct AlignedRow {
  LineKind kind;  // Context (equal), Deleted or Added
  int old_index;  // 0-based, -1 for Added
  int new_index;  // 0-based, -1 for Deleted
};

/// Full alignment of two texts (every line of both sides appears once), with
/// deletions ordered before insertions inside each change block.
std::vector<AlignedRow> align_lines(std::string_view pre, std::string_view post);

/// Token counts by line class.
struct TokenClassCounts {
  std::size_t change = 0;
  std::size_t header = 0;
  std::size_t context = 0;
  std::size_t message = 0;
  std::size_t excluded_files = 0;  // binary or content-free file diffs, not counted

  std::size_t total() const { return change + header + context + message; }
  friend bool operator==(const TokenClassCounts&, const TokenClassCounts&) = default;
};

/// Token counts per class for the rendered representation of `diff`.
/// Binary and rename/mode-only file diffs are excluded and counted in
/// `excluded_files`.
TokenClassCounts classify_token_budget(const CommitDiff& diff, const Tokenizer& tokenizer);

}  // namespace diff
}  // namespace vfc
