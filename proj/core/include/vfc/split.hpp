#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vfc/record.hpp"

namespace vfc::corpus {

enum class Split { Train, Val, Test };
enum class SplitStrategy { Random, Temporal, Group, Cve };

std::string_view to_string(Split s);
std::string_view to_string(SplitStrategy s);
SplitStrategy split_strategy_from_string(std::string_view s);  // throws ConfigError

struct Fractions {
  double train = 0.6;
  double val = 0.2;
  double test = 0.2;

  /// Throws ConfigError unless all parts are positive and sum to 1.
  void validate() const;
  double operator[](Split s) const;
};

struct SplitStats {
  std::size_t size = 0;
  std::size_t vfc = 0;
  double fraction = 0.0;
  double vuln_ratio = 0.0;
};

struct SplitOptions {
  Fractions fractions;
  std::uint64_t seed = 0;
  /// Deviation (fraction points) above which a warning is recorded.
  double tolerance = 0.02;
  /// CVE split only: VFC share in val/test; defaults to the corpus ratio.
  std::optional<double> target_ratio;
};

struct SplitAssignment {
  SplitStrategy strategy = SplitStrategy::Random;
  std::uint64_t seed = 0;
  Fractions fractions;
  std::vector<std::string> ids;  // record ids in input order
  std::vector<Split> splits;     // parallel to ids
  std::array<SplitStats, 3> stats{};
  double global_ratio = 0.0;
  std::vector<std::string> warnings;

  const SplitStats& operator[](Split s) const { return stats[static_cast<int>(s)]; }
  double max_size_deviation() const;
  double max_ratio_deviation() const;
  nlohmann::json manifest() const;
  /// "id<TAB>split" lines in input order.
  void write_table(std::ostream& out) const;
};

/// Label-stratified seeded shuffle with contiguous cuts per label.
SplitAssignment split_random(const std::vector<CommitRecord>& records, const SplitOptions& opts);
/// Oldest records train, newest test; ties ordered by sha. Requires timestamps.
SplitAssignment split_temporal(const std::vector<CommitRecord>& records, const SplitOptions& opts);
/// Whole groups per split: test vs rest first, then train vs val, each by
/// greedy assignment refined with single moves and pairwise swaps.
SplitAssignment split_group_stratified(const std::vector<CommitRecord>& records, const SplitOptions& opts);
/// CVE-mapped VFCs alternate between val and test; benign records top both
/// up to the target ratio; everything else trains.
SplitAssignment split_cve(const std::vector<CommitRecord>& records, const SplitOptions& opts);

SplitAssignment split(SplitStrategy strategy, const std::vector<CommitRecord>& records, const SplitOptions& opts);

}  // namespace vfc::corpus
