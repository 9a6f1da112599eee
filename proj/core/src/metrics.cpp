#include "vfc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_set>

#include <fmt/format.h>

#include "vfc/error.hpp"
#include "vfc/record.hpp"
#include "vfc/text.hpp"

namespace vfc::metrics {

namespace {

double ratio(std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); }

std::vector<ScoredPrediction> sorted_desc(const std::vector<ScoredPrediction>& preds) {
  auto s = preds;
  std::stable_sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
  return s;
}

}  // namespace

nlohmann::json OperatingPoint::to_json() const {
  return {{"threshold", std::isinf(threshold) ? nlohmann::json("inf") : nlohmann::json(threshold)},
          {"tp", tp}, {"fp", fp}, {"tn", tn}, {"fn", fn},
          {"fpr", fpr}, {"fnr", fnr}, {"tpr", tpr},
          {"precision", precision}, {"recall", recall}, {"f1", f1}};
}

OperatingPoint operating_point(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn, double threshold) {
  OperatingPoint p;
  p.threshold = threshold;
  p.tp = tp;
  p.fp = fp;
  p.tn = tn;
  p.fn = fn;
  p.fpr = ratio(fp, fp + tn);
  p.tpr = ratio(tp, tp + fn);
  p.fnr = ratio(fn, tp + fn);
  p.precision = ratio(tp, tp + fp);
  p.recall = p.tpr;
  p.f1 = p.precision + p.recall > 0 ? 2 * p.precision * p.recall / (p.precision + p.recall) : 0.0;
  return p;
}

OperatingPoint f1_at(const std::vector<ScoredPrediction>& preds, double threshold) {
  if (preds.empty()) throw DataError("f1 needs at least one prediction");
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (const auto& p : preds) {
    const bool hit = p.score >= threshold;
    if (p.positive) (hit ? tp : fn)++;
    else (hit ? fp : tn)++;
  }
  return operating_point(tp, fp, tn, fn, threshold);
}

std::vector<OperatingPoint> threshold_sweep(const std::vector<ScoredPrediction>& preds) {
  if (preds.empty()) throw DataError("threshold sweep needs at least one prediction");
  std::size_t pos = 0;
  for (const auto& p : preds) pos += p.positive;
  const std::size_t neg = preds.size() - pos;
  const auto s = sorted_desc(preds);
  std::vector<OperatingPoint> out;
  out.push_back(operating_point(0, 0, neg, pos, std::numeric_limits<double>::infinity()));
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < s.size();) {
    const double t = s[i].score;
    for (; i < s.size() && s[i].score == t; ++i) (s[i].positive ? tp : fp)++;
    out.push_back(operating_point(tp, fp, neg - fp, pos - tp, t));
  }
  return out;
}

double pd_s(const std::vector<ScoredPrediction>& preds, double r) {
  if (!(r >= 0 && r <= 1)) throw ConfigError("pd_s: r must lie in [0, 1]");
  std::size_t pos = 0;
  for (const auto& p : preds) pos += p.positive;
  if (pos == 0 || pos == preds.size()) throw DataError("pd_s needs at least one positive and one negative label");
  // Sweep is descending in threshold with non-decreasing TPR and FPR, so the
  // last compliant point has maximal TPR, and among equal TPR the earliest has
  // the lowest FPR and highest threshold.
  const auto sweep = threshold_sweep(preds);
  const OperatingPoint* best = &sweep.front();
  for (const auto& p : sweep) {
    if (p.fpr > r) break;
    if (p.tpr > best->tpr) best = &p;
  }
  return best->fnr;
}

bool is_discrete(const std::vector<ScoredPrediction>& preds) {
  return std::all_of(preds.begin(), preds.end(), [](const auto& p) { return p.score == 0.0 || p.score == 1.0; });
}

void require_scores(const std::vector<ScoredPrediction>& preds) {
  if (is_discrete(preds))
    throw CapabilityError("PD-S is undefined for discrete 0/1 scores; supply continuous scores");
}

std::vector<ScoredPrediction> read_predictions(std::istream& in) {
  std::vector<ScoredPrediction> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fail = [&](const std::string& msg) { return DataError(fmt::format("predictions line {}: {}", lineno, msg)); };
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw fail(e.what());
    }
    if (!j.is_object()) throw fail("expected an object");
    ScoredPrediction p;
    if (!j.contains("id") || !j["id"].is_string()) throw fail("missing string field 'id'");
    p.id = j["id"].get<std::string>();
    if (!j.contains("score") || !j["score"].is_number()) throw fail("missing numeric field 'score'");
    p.score = j["score"].get<double>();
    if (!std::isfinite(p.score)) throw fail("score is not finite");
    if (!j.contains("label")) throw fail("missing field 'label'");
    const auto& l = j["label"];
    std::optional<corpus::Label> label;
    if (l.is_boolean()) label = l.get<bool>() ? corpus::Label::VFC : corpus::Label::NonVFC;
    else if (l.is_number_integer()) label = corpus::label_from_string(std::to_string(l.get<long long>()));
    else if (l.is_string()) label = corpus::label_from_string(l.get<std::string>());
    if (!label) throw fail("unrecognized label");
    p.positive = *label == corpus::Label::VFC;
    if (!seen.insert(p.id).second) throw fail("duplicate id '" + p.id + "'");
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<ScoredPrediction> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open predictions file " + path.string());
  return read_predictions(in);
}

}  // namespace vfc::metrics
