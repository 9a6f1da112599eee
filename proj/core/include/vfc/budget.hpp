#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vfc/diff.hpp"
#include "vfc/tokenizer.hpp"

namespace vfc::enrich {
struct EnrichedDiff;
}

namespace vfc::budget {

enum class LineClass { Change, Header, Context, Message };

std::string_view to_string(LineClass c);

/// One rendered line. `text` excludes the +/-/space prefix of diff lines;
/// `prefix` holds it so rendering is lossless.
struct DocLine {
  LineClass cls = LineClass::Context;
  std::string text;
  std::string prefix;
  int file = -1;  // index of the file the line belongs to; -1 for message/preamble
};

struct Document {
  std::vector<DocLine> lines;

  static Document from_commit_diff(const diff::CommitDiff& diff);
  static Document from_enriched(const enrich::EnrichedDiff& diff);
  std::string render() const;
};

struct ClassCounts {
  std::size_t change = 0;
  std::size_t header = 0;
  std::size_t context = 0;
  std::size_t message = 0;

  std::size_t total() const { return change + header + context + message; }
  std::size_t& at(LineClass c);
  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

ClassCounts count_tokens(const Document& doc, const Tokenizer& tok);
ClassCounts count_tokens(const std::vector<DocLine>& lines, const Tokenizer& tok);

struct TruncationReport {
  std::size_t limit = 0;
  ClassCounts before;
  ClassCounts removed;
  /// Change tokens removed / change tokens present (0 when none present).
  double discarded_change_fraction = 0.0;
  /// Change tokens removed / all tokens removed (0 when nothing removed).
  double change_share_of_removed = 0.0;
  bool affected = false;

  nlohmann::json to_json() const;
};

struct Truncated {
  Document doc;
  TruncationReport report;
};

/// Drops context lines farthest from a change in the same file first (files
/// without changes count as infinitely far; later lines go first on ties),
/// then header lines, then message lines, and finally cuts change lines from
/// the tail at token granularity. Throws ConfigError when limit is 0.
Truncated truncate_context_aware(const Document& doc, std::size_t limit, const Tokenizer& tok);

/// Keeps the first `limit` tokens in rendering order.
Truncated truncate_naive(const Document& doc, std::size_t limit, const Tokenizer& tok);

}  // namespace vfc::budget
