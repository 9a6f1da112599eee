#include "vfc/record.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "vfc/error.hpp"
#include "vfc/text.hpp"

namespace vfc::corpus {

using nlohmann::json;

std::string_view to_string(Label label) { return label == Label::VFC ? "VFC" : "NonVFC"; }

std::string_view to_string(LabelSource source) {
  switch (source) {
    case LabelSource::Manual: return "manual";
    case LabelSource::Advisory: return "advisory";
    case LabelSource::Tool: return "tool";
    case LabelSource::Synthetic: return "synthetic";
  }
  return "?";
}

std::optional<Label> label_from_string(std::string_view s) {
  const std::string l = to_lower(trim(s));
  if (l == "vfc" || l == "1" || l == "true" || l == "positive") return Label::VFC;
  if (l == "nonvfc" || l == "non-vfc" || l == "0" || l == "false" || l == "negative") return Label::NonVFC;
  return std::nullopt;
}

std::optional<LabelSource> label_source_from_string(std::string_view s) {
  const std::string l = to_lower(trim(s));
  if (l == "manual") return LabelSource::Manual;
  if (l == "advisory") return LabelSource::Advisory;
  if (l == "tool") return LabelSource::Tool;
  if (l == "synthetic") return LabelSource::Synthetic;
  return std::nullopt;
}

std::string normalize_repo(std::string_view url) {
  std::string s = to_lower(trim(url));
  if (auto p = s.find("://"); p != std::string::npos) s = s.substr(p + 3);
  if (auto at = s.find('@'); at != std::string::npos && at < s.find('/')) s = s.substr(at + 1);
  // scp-like "host:owner/name"
  if (auto colon = s.find(':'); colon != std::string::npos && colon < s.find('/')) {
    const std::string rest = s.substr(colon + 1);
    const bool port = !rest.empty() && std::all_of(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(std::min(rest.find('/'), rest.size())),
                                                   [](char c) { return c >= '0' && c <= '9'; });
    s = port ? s.substr(0, colon) + rest.substr(rest.find('/')) : s.substr(0, colon) + "/" + rest;
  }
  while (!s.empty() && s.back() == '/') s.pop_back();
  if (ends_with(s, ".git")) s.resize(s.size() - 4);
  while (!s.empty() && s.back() == '/') s.pop_back();
  return s;
}

namespace {

const std::set<std::string> kKnownFields = {"repo",      "sha",      "timestamp", "message", "diff",
                                            "label",     "label_source", "cve_ids", "languages", "group_id",
                                            "sources"};

std::set<std::string> string_set(const json& j, const char* field) {
  std::set<std::string> out;
  if (j.is_null()) return out;
  if (j.is_string()) {
    out.insert(j.get<std::string>());
    return out;
  }
  if (!j.is_array()) throw DataError(std::string("field '") + field + "' must be an array of strings");
  for (const auto& v : j) {
    if (!v.is_string()) throw DataError(std::string("field '") + field + "' must be an array of strings");
    out.insert(v.get<std::string>());
  }
  return out;
}

}  // namespace

CommitRecord record_from_json(const json& j) {
  if (!j.is_object()) throw DataError("record is not an object");
  CommitRecord r;
  if (!j.contains("repo") || !j["repo"].is_string() || trim(j["repo"].get<std::string>()).empty())
    throw DataError("missing field 'repo'");
  r.repo = normalize_repo(j["repo"].get<std::string>());
  if (!j.contains("sha") || !j["sha"].is_string()) throw DataError("missing field 'sha'");
  r.sha = to_lower(trim(j["sha"].get<std::string>()));
  if (r.sha.size() != 40 || !std::all_of(r.sha.begin(), r.sha.end(), [](char c) {
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
      }))
    throw DataError("field 'sha' must be 40 hex digits");
  if (j.contains("timestamp") && !j["timestamp"].is_null()) {
    if (!j["timestamp"].is_number_integer() && !j["timestamp"].is_number_unsigned())
      throw DataError("field 'timestamp' must be an integer");
    r.timestamp = j["timestamp"].get<std::int64_t>();
  }
  if (j.contains("message") && !j["message"].is_null()) {
    if (!j["message"].is_string()) throw DataError("field 'message' must be a string");
    r.message = j["message"].get<std::string>();
  }
  if (j.contains("diff") && !j["diff"].is_null()) {
    if (!j["diff"].is_string()) throw DataError("field 'diff' must be a string");
    r.diff = j["diff"].get<std::string>();
  }
  if (!j.contains("label")) throw DataError("missing field 'label'");
  {
    const json& l = j["label"];
    std::optional<Label> label;
    if (l.is_string()) label = label_from_string(l.get<std::string>());
    else if (l.is_boolean()) label = l.get<bool>() ? Label::VFC : Label::NonVFC;
    else if (l.is_number_integer()) label = l.get<int>() == 1 ? std::optional(Label::VFC)
                                            : l.get<int>() == 0 ? std::optional(Label::NonVFC) : std::nullopt;
    if (!label) throw DataError("field 'label' must be VFC or NonVFC");
    r.label = *label;
  }
  if (j.contains("label_source"))
    for (const auto& s : string_set(j["label_source"], "label_source")) {
      auto ls = label_source_from_string(s);
      if (!ls) throw DataError("unknown label_source '" + s + "'");
      r.label_source.insert(*ls);
    }
  if (j.contains("cve_ids"))
    for (const auto& c : string_set(j["cve_ids"], "cve_ids")) {
      std::string up;
      for (char ch : trim(c)) up += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      if (!up.empty()) r.cve_ids.insert(up);
    }
  if (j.contains("languages"))
    for (const auto& l : string_set(j["languages"], "languages")) r.languages.insert(to_lower(trim(l)));
  if (j.contains("group_id") && j["group_id"].is_string()) r.group_id = j["group_id"].get<std::string>();
  if (r.group_id.empty()) r.group_id = r.repo;
  if (j.contains("sources")) r.sources = string_set(j["sources"], "sources");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!kKnownFields.count(it.key())) r.passthrough[it.key()] = it.value();
  return r;
}

json record_to_json(const CommitRecord& r) {
  json j = json::object();
  j["repo"] = r.repo;
  j["sha"] = r.sha;
  j["timestamp"] = r.timestamp ? json(*r.timestamp) : json(nullptr);
  j["message"] = r.message;
  j["diff"] = r.diff;
  j["label"] = std::string(to_string(r.label));
  json ls = json::array();
  for (auto s : r.label_source) ls.push_back(std::string(to_string(s)));
  j["label_source"] = ls;
  j["cve_ids"] = r.cve_ids;
  j["languages"] = r.languages;
  j["group_id"] = r.group_id;
  j["sources"] = r.sources;
  for (auto it = r.passthrough.begin(); it != r.passthrough.end(); ++it) j[it.key()] = it.value();
  return j;
}

std::string serialize_record(const CommitRecord& r) {
  return record_to_json(r).dump(-1, ' ', false, json::error_handler_t::replace);
}

IngestResult ingest_stream(std::istream& in) {
  IngestResult res;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    try {
      res.records.push_back(record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      res.issues.push_back({n, std::string("invalid JSON: ") + e.what()});
    } catch (const DataError& e) {
      res.issues.push_back({n, e.what()});
    }
  }
  return res;
}

IngestResult ingest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return ingest_stream(in);
}

void write_records(std::ostream& out, const std::vector<CommitRecord>& records) {
  for (const auto& r : records) out << serialize_record(r) << '\n';
}

std::map<std::string, std::string> load_group_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto parts = split(collapse_whitespace(t), ' ');
    if (parts.size() != 2) throw DataError("group map line " + std::to_string(n) + ": expected 'repo group'");
    out[normalize_repo(parts[0])] = parts[1];
  }
  return out;
}

void apply_group_map(std::vector<CommitRecord>& records, const std::map<std::string, std::string>& map) {
  for (auto& r : records)
    if (auto it = map.find(r.repo); it != map.end()) r.group_id = it->second;
}

}  // namespace vfc::corpus
