#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace vfc::metrics {

inline constexpr double kDefaultMaxFpr = 0.005;

struct ScoredPrediction {
  std::string id;
  double score = 0.0;
  bool positive = false;  // label is VFC
};

/// Classification is positive iff score >= threshold.
struct OperatingPoint {
  double threshold = 0.0;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double fpr = 0.0, fnr = 0.0, tpr = 0.0;
  double precision = 0.0, recall = 0.0, f1 = 0.0;

  nlohmann::json to_json() const;
};

OperatingPoint operating_point(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn, double threshold);

/// Throws ConfigError on empty input.
OperatingPoint f1_at(const std::vector<ScoredPrediction>& preds, double threshold = 0.5);

/// One point at +inf followed by one per distinct score, descending.
std::vector<OperatingPoint> threshold_sweep(const std::vector<ScoredPrediction>& preds);

/// FNR at the threshold with the highest TPR among those with FPR <= r; ties
/// go to lower FPR, then higher threshold. Throws DataError when either class
/// is absent and ConfigError when r is outside [0, 1].
double pd_s(const std::vector<ScoredPrediction>& preds, double r = kDefaultMaxFpr);

/// True when every score is 0 or 1, i.e. hard labels rather than scores.
bool is_discrete(const std::vector<ScoredPrediction>& preds);
/// Throws CapabilityError for discrete predictions, where PD-S is undefined.
void require_scores(const std::vector<ScoredPrediction>& preds);

/// Line-delimited {id, score, label}. Throws DataError naming the line for
/// malformed entries, non-finite scores or duplicate ids.
std::vector<ScoredPrediction> read_predictions(std::istream& in);
std::vector<ScoredPrediction> read_predictions(const std::filesystem::path& path);

}  // namespace vfc::metrics
