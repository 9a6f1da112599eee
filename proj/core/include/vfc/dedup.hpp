#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vfc/record.hpp"

namespace vfc::corpus {

struct DedupStats {
  std::size_t input = 0;
  std::size_t merged = 0;          // records folded into an earlier duplicate
  std::size_t conflict_groups = 0;  // keys whose labels disagreed
  std::size_t conflict_records = 0;
  std::size_t output = 0;
};

/// Merges records sharing (repo, sha). Metadata sets are unioned into the
/// first occurrence; keys whose labels disagree are dropped entirely.
std::vector<CommitRecord> dedup_exact(const std::vector<CommitRecord>& records, DedupStats* stats = nullptr);

/// Diff body with preamble, index and sha lines removed and whitespace runs
/// collapsed, prefixed by the sorted list of modified paths.
std::string semantic_key(const CommitRecord& r);
std::uint64_t semantic_fingerprint(const CommitRecord& r);

/// Keeps one record per fingerprint class: most cve_ids, then most sources,
/// then smallest repo (then smallest sha). Survivors keep their input order.
std::vector<CommitRecord> dedup_semantic(const std::vector<CommitRecord>& records, DedupStats* stats = nullptr);

}  // namespace vfc::corpus
