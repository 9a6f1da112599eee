#include "vfc/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "vfc/error.hpp"

namespace vfc::corpus {

namespace {

constexpr double kSumTolerance = 1e-9;

void check_distribution(const std::vector<double>& p, const char* name) {
  double sum = 0;
  for (double x : p) {
    if (!(x >= 0) || !std::isfinite(x)) throw ConfigError(fmt::format("{} has a negative or non-finite entry", name));
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) throw ConfigError(fmt::format("{} sums to {} instead of 1", name, sum));
}

double kl_to_mix(double a, double m) { return a > 0 ? a * std::log2(a / m) : 0.0; }

}  // namespace

double js_divergence(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw ConfigError("distributions have different support sizes");
  check_distribution(p, "p");
  check_distribution(q, "q");
  double d = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    d += 0.5 * kl_to_mix(p[i], m) + 0.5 * kl_to_mix(q[i], m);
  }
  return std::clamp(d, 0.0, 1.0);
}

double js_divergence(const std::map<std::string, double>& p_counts, const std::map<std::string, double>& q_counts) {
  std::set<std::string> keys;
  double sp = 0, sq = 0;
  for (const auto& [k, v] : p_counts) keys.insert(k), sp += v;
  for (const auto& [k, v] : q_counts) keys.insert(k), sq += v;
  if (sp <= 0 || sq <= 0) throw ConfigError("cannot normalize an empty count map");
  std::vector<double> p, q;
  for (const auto& k : keys) {
    auto ip = p_counts.find(k);
    auto iq = q_counts.find(k);
    p.push_back(ip == p_counts.end() ? 0.0 : ip->second / sp);
    q.push_back(iq == q_counts.end() ? 0.0 : iq->second / sq);
  }
  // Renormalize to absorb rounding before the strict sum check.
  const double rp = std::accumulate(p.begin(), p.end(), 0.0);
  const double rq = std::accumulate(q.begin(), q.end(), 0.0);
  for (auto& x : p) x /= rp;
  for (auto& x : q) x /= rq;
  return js_divergence(p, q);
}

std::vector<std::size_t> chronological_order(const std::vector<CommitRecord>& records) {
  for (const auto& r : records)
    if (!r.timestamp) throw DataError("record " + r.id() + " has no timestamp");
  std::vector<std::size_t> idx(records.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    const auto& a = records[x];
    const auto& b = records[y];
    if (*a.timestamp != *b.timestamp) return *a.timestamp < *b.timestamp;
    if (a.sha != b.sha) return a.sha < b.sha;
    return a.repo < b.repo;
  });
  return idx;
}

std::size_t window_count(const std::array<double, 3>& window_fracs, double stride) {
  const double total = window_fracs[0] + window_fracs[1] + window_fracs[2];
  if (!(stride > 0)) throw ConfigError("stride must be positive");
  for (double f : window_fracs)
    if (!(f > 0)) throw ConfigError("window fractions must be positive");
  if (total > 1 + kSumTolerance) throw ConfigError("window fractions sum above 1");
  return static_cast<std::size_t>(std::floor((1.0 - total) / stride + kSumTolerance)) + 1;
}

nlohmann::json WindowDiagnostics::to_json() const {
  auto range = [](const IndexRange& r) { return nlohmann::json::array({r.begin, r.end}); };
  nlohmann::json j = {{"offset", offset},
                      {"train", range(ranges[0])},
                      {"val", range(ranges[1])},
                      {"test", range(ranges[2])},
                      {"jsd", jsd},
                      {"unseen_project_fraction", unseen_project_fraction},
                      {"test_vuln_rate", test_vuln_rate}};
  j["test_f1"] = test_f1 ? nlohmann::json(*test_f1) : nlohmann::json(nullptr);
  return j;
}

std::vector<WindowDiagnostics> sliding_window_scan(const std::vector<CommitRecord>& records, const WindowOptions& opts) {
  if (records.empty()) throw DataError("sliding window scan needs a non-empty corpus");
  const std::size_t count = window_count(opts.window_fracs, opts.stride);
  const auto order = chronological_order(records);
  const double n = static_cast<double>(records.size());
  auto at = [&](double frac) { return std::min(records.size(), static_cast<std::size_t>(std::llround(frac * n))); };

  std::vector<WindowDiagnostics> out;
  for (std::size_t k = 0; k < count; ++k) {
    WindowDiagnostics w;
    w.offset = static_cast<double>(k) * opts.stride;
    double edge = w.offset;
    for (int s = 0; s < 3; ++s) {
      w.ranges[s].begin = at(edge);
      edge += opts.window_fracs[s];
      w.ranges[s].end = at(edge);
    }
    std::map<std::string, double> train_projects, test_projects;
    for (std::size_t i = w.ranges[0].begin; i < w.ranges[0].end; ++i) train_projects[records[order[i]].repo] += 1;
    std::size_t unseen = 0, vfc = 0;
    for (std::size_t i = w.ranges[2].begin; i < w.ranges[2].end; ++i) {
      const auto& r = records[order[i]];
      test_projects[r.repo] += 1;
      if (!train_projects.count(r.repo)) ++unseen;
      if (r.is_vfc()) ++vfc;
    }
    const double test_n = static_cast<double>(w.ranges[2].size());
    if (!train_projects.empty() && !test_projects.empty()) w.jsd = js_divergence(train_projects, test_projects);
    w.unseen_project_fraction = test_n > 0 ? static_cast<double>(unseen) / test_n : 0.0;
    w.test_vuln_rate = test_n > 0 ? static_cast<double>(vfc) / test_n : 0.0;
    if (k < opts.external_f1.size()) w.test_f1 = opts.external_f1[k];
    out.push_back(w);
  }
  return out;
}

}  // namespace vfc::corpus
