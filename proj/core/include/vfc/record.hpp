#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace vfc::corpus {

enum class Label { VFC, NonVFC };
enum class LabelSource { Manual, Advisory, Tool, Synthetic };

std::string_view to_string(Label label);
std::string_view to_string(LabelSource source);
/// Accepts "VFC"/"NonVFC" (any case), "1"/"0", true/false spellings.
std::optional<Label> label_from_string(std::string_view s);
std::optional<LabelSource> label_source_from_string(std::string_view s);

struct CommitRecord {
  std::string repo;  // normalized: host/owner/name, lowercase
  std::string sha;   // 40 lowercase hex digits
  std::optional<std::int64_t> timestamp;
  std::string message;
  std::string diff;
  Label label = Label::NonVFC;
  std::set<LabelSource> label_source;
  std::set<std::string> cve_ids;
  std::set<std::string> languages;  // lowercase language names
  std::string group_id;             // defaults to repo
  std::set<std::string> sources;
  nlohmann::json passthrough = nlohmann::json::object();  // unknown fields, preserved

  std::string id() const { return repo + "@" + sha; }
  bool is_vfc() const { return label == Label::VFC; }
};

/// "https://GitHub.com/Foo/Bar.git" -> "github.com/foo/bar"; also handles
/// scp-style "git@host:owner/name" and trailing slashes.
std::string normalize_repo(std::string_view url);

/// Throws DataError naming the offending field.
CommitRecord record_from_json(const nlohmann::json& j);
nlohmann::json record_to_json(const CommitRecord& r);
/// Compact one-line JSON with a stable key order.
std::string serialize_record(const CommitRecord& r);

struct IngestIssue {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct IngestResult {
  std::vector<CommitRecord> records;
  std::vector<IngestIssue> issues;
};

/// Reads line-delimited JSON records; blank lines are skipped. Invalid lines
/// are reported and skipped. Throws IoError when the file cannot be opened.
IngestResult ingest(const std::filesystem::path& path);
IngestResult ingest_stream(std::istream& in);

void write_records(std::ostream& out, const std::vector<CommitRecord>& records);

/// Mapping file: one "repo group" pair per line ('#' comments allowed).
std::map<std::string, std::string> load_group_map(const std::filesystem::path& path);
void apply_group_map(std::vector<CommitRecord>& records, const std::map<std::string, std::string>& map);

}  // namespace vfc::corpus
