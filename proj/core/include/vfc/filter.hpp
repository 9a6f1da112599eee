#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vfc/record.hpp"

namespace vfc::corpus {

/// Conjunction of optional predicates. Set-valued criteria match when the
/// record shares at least one element with the criterion.
struct FilterCriteria {
  std::optional<std::set<std::string>> languages;
  std::optional<std::set<LabelSource>> label_sources;
  std::optional<std::set<std::string>> sources;
  std::optional<std::int64_t> time_from;  // inclusive
  std::optional<std::int64_t> time_to;    // inclusive
  std::optional<bool> has_cve;

  bool empty() const;
  bool matches(const CommitRecord& r) const;
  nlohmann::json to_json() const;
};

/// Presets mirroring the four dataset compositions of increasing scope:
/// ds1 manually reviewed C/C++, ds2 adds advisory-mapped, ds3 any labelling
/// of C/C++, ds4 everything. Throws ConfigError for unknown names.
FilterCriteria filter_preset(std::string_view name);

std::vector<CommitRecord> filter(const std::vector<CommitRecord>& records, const FilterCriteria& criteria);

}  // namespace vfc::corpus
