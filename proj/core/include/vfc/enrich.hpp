#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vfc/diff.hpp"
#include "vfc/functions.hpp"
#include "vfc/record.hpp"
#include "vfc/snapshot.hpp"
#include "vfc/structdiff.hpp"

namespace vfc::enrich {

using structdiff::Side;
using structdiff::StatementSet;
using syntax::StatementId;
using syntax::StatementIR;

enum class Level { cf, df1, df2 };

std::string_view to_string(Level level);
/// Throws ConfigError for anything but "cf", "df1", "df2".
Level level_from_string(std::string_view s);
/// Data-flow depth: cf 0, df1 1, df2 2.
int depth(Level level);

/// Statements preceding a seed that write a variable the seed reads, taken
/// transitively up to `d` hops. Seeds are never part of the result.
StatementSet backward_slice(const StatementSet& seed, const StatementIR& ir, int d);
/// Statements following a seed that read a variable the seed writes.
StatementSet forward_slice(const StatementSet& seed, const StatementIR& ir, int d);
/// Innermost enclosing control header of each seed (the whole chain when
/// `full_chain` is set).
StatementSet control_flow_enclosure(const StatementSet& seed, const StatementIR& ir, bool full_chain = false);

/// Why a context statement was selected. Depth is the slice distance.
struct Reason {
  enum Kind { Enclosure, Backward, Forward } kind = Enclosure;
  int depth = 0;
  std::string str() const;
  friend bool operator==(const Reason&, const Reason&) = default;
};

/// Context statements of one side at a given depth: slices of the seeds plus
/// enclosures of seeds and slices, seeds excluded.
std::map<StatementId, Reason> select_context(const StatementSet& seed, const StatementIR& ir, int d,
                                             bool full_chain = false);

enum class Tag { ChangedAdded, ChangedDeleted, CtxControl, CtxDataflow, CtxRaw, Header };

std::string_view to_string(Tag tag);

struct EnrichedLine {
  Tag tag = Tag::CtxControl;
  std::string text;
  std::optional<int> old_lineno;
  std::optional<int> new_lineno;
  int dataflow_level = 0;  // 1 or 2 for CtxDataflow lines
  std::string provenance;  // "change", "enclosure", "backward d=1", "forward d=2", "fallback"
};

struct EnrichedHunk {
  int old_start = 0;
  int old_count = 0;
  int new_start = 0;
  int new_count = 0;
  std::string function;  // empty for changes outside functions
  std::vector<EnrichedLine> lines;

  std::string header() const;
};

struct EnrichedFile {
  std::string old_path;
  std::string new_path;
  syntax::FileFallback fallback = syntax::FileFallback::None;
  std::vector<diff::DiffLine> header;  // raw header lines for fallback files
  std::vector<EnrichedHunk> hunks;
};

/// Statement-level trace of one function, for audits and fixtures.
struct FunctionTrace {
  std::string path;
  std::string name;
  std::set<StatementId> pre_changed;
  std::set<StatementId> post_changed;
  std::map<StatementId, Reason> pre_context;
  std::map<StatementId, Reason> post_context;
  std::vector<std::string> pre_statements;   // statement text by id
  std::vector<std::string> post_statements;
  std::vector<int> pre_statement_lines;  // first line of each statement
  std::vector<int> post_statement_lines;
};

struct EnrichedDiff {
  std::optional<std::string> message;
  Level level = Level::cf;
  bool full_chain = false;
  std::vector<EnrichedFile> files;
  std::vector<FunctionTrace> functions;

  bool has_fallback() const;
  /// Unified-diff flavoured text; hunk headers name the function.
  std::string render() const;
  diff::CommitDiff to_commit_diff() const;
  /// Annotated record: per-line tags and provenance plus traces.
  nlohmann::json to_json() const;
};

struct EnrichOptions {
  Level level = Level::cf;
  bool full_chain = false;
  structdiff::MatchOptions match;
};

/// Algorithm core over already analysed files.
EnrichedDiff enrich_files(const std::vector<syntax::FileAnalysis>& files, const EnrichOptions& options);

/// Parses `diff_text`, fetches snapshots and enriches. Throws ParseError when
/// the diff is unparseable; per-file problems degrade to the raw diff.
EnrichedDiff enrich_diff(std::string_view diff_text, const corpus::SnapshotProvider& snapshots,
                         const std::string& repo, const std::string& sha, const EnrichOptions& options);

EnrichedDiff enrich_commit(const corpus::CommitRecord& record, const corpus::SnapshotProvider& snapshots,
                           const EnrichOptions& options);

}  // namespace vfc::enrich
