#include "vfc/dedup.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "vfc/text.hpp"

namespace vfc::corpus {

std::vector<CommitRecord> dedup_exact(const std::vector<CommitRecord>& records, DedupStats* stats) {
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<CommitRecord> merged;
  std::vector<bool> conflict;
  std::vector<std::size_t> members;
  DedupStats st;
  st.input = records.size();
  for (const auto& r : records) {
    const std::string key = r.repo + '\n' + r.sha;
    auto [it, fresh] = slot.try_emplace(key, merged.size());
    if (fresh) {
      merged.push_back(r);
      conflict.push_back(false);
      members.push_back(1);
      continue;
    }
    auto& m = merged[it->second];
    ++members[it->second];
    ++st.merged;
    if (m.label != r.label) conflict[it->second] = true;
    m.sources.insert(r.sources.begin(), r.sources.end());
    m.label_source.insert(r.label_source.begin(), r.label_source.end());
    m.cve_ids.insert(r.cve_ids.begin(), r.cve_ids.end());
    m.languages.insert(r.languages.begin(), r.languages.end());
    if (!m.timestamp) m.timestamp = r.timestamp;
    if (m.message.empty()) m.message = r.message;
    if (m.diff.empty()) m.diff = r.diff;
    for (auto& [k, v] : r.passthrough.items())
      if (!m.passthrough.contains(k)) m.passthrough[k] = v;
  }
  std::vector<CommitRecord> out;
  out.reserve(merged.size());
  for (std::size_t i = 0; i < merged.size(); ++i) {
    if (conflict[i]) {
      ++st.conflict_groups;
      st.conflict_records += members[i];
      continue;
    }
    out.push_back(std::move(merged[i]));
  }
  st.output = out.size();
  if (stats) *stats = st;
  return out;
}

namespace {

bool is_hex(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
  });
}

std::string strip_side(std::string_view p) {
  p = trim(p);
  if (auto tab = p.find('\t'); tab != std::string_view::npos) p = p.substr(0, tab);
  if (starts_with(p, "a/") || starts_with(p, "b/")) p.remove_prefix(2);
  return std::string(p);
}

}  // namespace

std::string semantic_key(const CommitRecord& r) {
  std::set<std::string> paths;
  std::string body;
  bool in_files = false;
  for (const auto& line : split_lines(r.diff)) {
    std::string_view t = line.text;
    if (starts_with(t, "diff --git ") || starts_with(t, "--- ")) in_files = true;
    if (!in_files) continue;  // mail headers, commit message
    if (starts_with(t, "index ") || starts_with(t, "diff --git ")) continue;
    if (starts_with(t, "From ") || starts_with(t, "commit ")) continue;
    if (is_hex(t) && t.size() >= 7) continue;
    if (starts_with(t, "--- ") || starts_with(t, "+++ ")) {
      std::string p = strip_side(t.substr(4));
      if (p != "/dev/null") paths.insert(p);
    }
    body += collapse_whitespace(t);
    body += '\n';
  }
  std::string key;
  for (const auto& p : paths) {
    key += p;
    key += '\0';
  }
  key += '\n';
  key += body;
  return key;
}

std::uint64_t semantic_fingerprint(const CommitRecord& r) { return fnv1a64(semantic_key(r)); }

std::vector<CommitRecord> dedup_semantic(const std::vector<CommitRecord>& records, DedupStats* stats) {
  auto better = [](const CommitRecord& a, const CommitRecord& b) {
    if (a.cve_ids.size() != b.cve_ids.size()) return a.cve_ids.size() > b.cve_ids.size();
    if (a.sources.size() != b.sources.size()) return a.sources.size() > b.sources.size();
    if (a.repo != b.repo) return a.repo < b.repo;
    return a.sha < b.sha;
  };
  // Full keys rather than 64-bit hashes so collisions cannot merge records.
  std::unordered_map<std::string, std::size_t> best;
  std::vector<std::string> keys;
  keys.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    keys.push_back(semantic_key(records[i]));
    auto [it, fresh] = best.try_emplace(keys.back(), i);
    if (!fresh && better(records[i], records[it->second])) it->second = i;
  }
  std::vector<CommitRecord> out;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (best.at(keys[i]) == i) out.push_back(records[i]);
  if (stats) {
    *stats = {};
    stats->input = records.size();
    stats->merged = records.size() - out.size();
    stats->output = out.size();
  }
  return out;
}

}  // namespace vfc::corpus
