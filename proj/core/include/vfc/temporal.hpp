#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vfc/record.hpp"

namespace vfc::corpus {

/// Half-open index range into the chronologically sorted corpus.
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

struct WindowDiagnostics {
  double offset = 0.0;
  std::array<IndexRange, 3> ranges{};  // train, val, test
  std::optional<double> test_f1;       // supplied externally
  double jsd = 0.0;                    // train vs test project distributions
  double unseen_project_fraction = 0.0;  // test records whose project never occurs in train
  double test_vuln_rate = 0.0;

  nlohmann::json to_json() const;
};

struct WindowOptions {
  std::array<double, 3> window_fracs{0.2, 0.2, 0.2};
  double stride = 0.05;
  /// Per-window scores in offset order; missing entries stay empty.
  std::vector<double> external_f1;
};

/// Jensen-Shannon divergence with base-2 logarithms. Throws ConfigError when
/// the inputs are not distributions over the same support.
double js_divergence(const std::vector<double>& p, const std::vector<double>& q);
/// Normalizes both count maps over the union of their keys.
double js_divergence(const std::map<std::string, double>& p_counts, const std::map<std::string, double>& q_counts);

/// Record indices ordered by (timestamp, sha, repo). Throws DataError when a
/// timestamp is missing.
std::vector<std::size_t> chronological_order(const std::vector<CommitRecord>& records);

/// Number of offsets k*stride with k*stride + sum(window_fracs) <= 1.
std::size_t window_count(const std::array<double, 3>& window_fracs, double stride);

std::vector<WindowDiagnostics> sliding_window_scan(const std::vector<CommitRecord>& records,
                                                   const WindowOptions& opts = {});

}  // namespace vfc::corpus
