#include "vfc/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "vfc/error.hpp"
#include "vfc/text.hpp"

namespace vfc::corpus {

std::string_view to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "?";
}

std::string_view to_string(SplitStrategy s) {
  switch (s) {
    case SplitStrategy::Random: return "random";
    case SplitStrategy::Temporal: return "temporal";
    case SplitStrategy::Group: return "group";
    case SplitStrategy::Cve: return "cve";
  }
  return "?";
}

SplitStrategy split_strategy_from_string(std::string_view s) {
  const std::string l = to_lower(s);
  if (l == "random") return SplitStrategy::Random;
  if (l == "temporal") return SplitStrategy::Temporal;
  if (l == "group" || l == "group-stratified") return SplitStrategy::Group;
  if (l == "cve") return SplitStrategy::Cve;
  throw ConfigError("unknown split strategy '" + std::string(s) + "'");
}

void Fractions::validate() const {
  if (!(train > 0 && val > 0 && test > 0)) throw ConfigError("split fractions must be positive");
  if (std::abs(train + val + test - 1.0) > 1e-6)
    throw ConfigError(fmt::format("split fractions must sum to 1 (got {})", train + val + test));
}

double Fractions::operator[](Split s) const {
  switch (s) {
    case Split::Train: return train;
    case Split::Val: return val;
    default: return test;
  }
}

double SplitAssignment::max_size_deviation() const {
  double d = 0;
  for (Split s : {Split::Train, Split::Val, Split::Test}) d = std::max(d, std::abs((*this)[s].fraction - fractions[s]));
  return d;
}

double SplitAssignment::max_ratio_deviation() const {
  double d = 0;
  for (Split s : {Split::Train, Split::Val, Split::Test})
    if ((*this)[s].size > 0) d = std::max(d, std::abs((*this)[s].vuln_ratio - global_ratio));
  return d;
}

nlohmann::json SplitAssignment::manifest() const {
  nlohmann::json splits_j = nlohmann::json::object();
  for (Split s : {Split::Train, Split::Val, Split::Test}) {
    const auto& st = (*this)[s];
    splits_j[std::string(to_string(s))] = {{"size", st.size},
                                           {"vfc", st.vfc},
                                           {"target_fraction", fractions[s]},
                                           {"fraction", st.fraction},
                                           {"vuln_ratio", st.vuln_ratio}};
  }
  return {{"strategy", to_string(strategy)},
          {"seed", seed},
          {"records", ids.size()},
          {"global_vuln_ratio", global_ratio},
          {"splits", splits_j},
          {"max_size_deviation", max_size_deviation()},
          {"max_ratio_deviation", max_ratio_deviation()},
          {"warnings", warnings}};
}

void SplitAssignment::write_table(std::ostream& out) const {
  for (std::size_t i = 0; i < ids.size(); ++i) out << ids[i] << '\t' << to_string(splits[i]) << '\n';
}

namespace {

SplitAssignment start(SplitStrategy strategy, const std::vector<CommitRecord>& records, const SplitOptions& opts) {
  opts.fractions.validate();
  SplitAssignment a;
  a.strategy = strategy;
  a.seed = opts.seed;
  a.fractions = opts.fractions;
  a.ids.reserve(records.size());
  for (const auto& r : records) a.ids.push_back(r.id());
  a.splits.assign(records.size(), Split::Train);
  return a;
}

void finish(SplitAssignment& a, const std::vector<CommitRecord>& records, double tolerance) {
  std::size_t vfc = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& st = a.stats[static_cast<int>(a.splits[i])];
    ++st.size;
    if (records[i].is_vfc()) {
      ++st.vfc;
      ++vfc;
    }
  }
  const double n = static_cast<double>(records.size());
  a.global_ratio = records.empty() ? 0.0 : static_cast<double>(vfc) / n;
  for (auto& st : a.stats) {
    st.fraction = records.empty() ? 0.0 : static_cast<double>(st.size) / n;
    st.vuln_ratio = st.size == 0 ? 0.0 : static_cast<double>(st.vfc) / static_cast<double>(st.size);
  }
  if (a.strategy == SplitStrategy::Cve) return;  // sizes are driven by the CVE set, not fractions
  for (Split s : {Split::Train, Split::Val, Split::Test}) {
    const auto& st = a[s];
    if (std::abs(st.fraction - a.fractions[s]) > tolerance)
      a.warnings.push_back(fmt::format("{} size fraction {:.4f} deviates from target {:.4f}", to_string(s), st.fraction,
                                       a.fractions[s]));
    if (st.size > 0 && std::abs(st.vuln_ratio - a.global_ratio) > tolerance)
      a.warnings.push_back(fmt::format("{} vulnerability ratio {:.4f} deviates from global {:.4f}", to_string(s),
                                       st.vuln_ratio, a.global_ratio));
  }
}

// Assigns an ordered index list by contiguous cuts at the cumulative fractions.
void cut(const std::vector<std::size_t>& order, const Fractions& f, std::vector<Split>& out) {
  const double n = static_cast<double>(order.size());
  const auto c1 = static_cast<std::size_t>(std::llround(n * f.train));
  const auto c2 = std::max(c1, static_cast<std::size_t>(std::llround(n * (f.train + f.val))));
  for (std::size_t k = 0; k < order.size(); ++k)
    out[order[k]] = k < c1 ? Split::Train : (k < c2 ? Split::Val : Split::Test);
}

struct Group {
  std::string id;
  std::size_t n = 0;
  std::size_t v = 0;
};

// Splits `groups` into side 0 and side 1, side 1 targeting `t` of the records.
class Bipartition {
 public:
  Bipartition(const std::vector<Group>& groups, std::vector<std::size_t> members, double t)
      : groups_(groups), members_(std::move(members)), t_(t) {
    for (auto g : members_) {
      total_n_ += static_cast<double>(groups_[g].n);
      total_v_ += static_cast<double>(groups_[g].v);
    }
    rho_ = total_n_ > 0 ? total_v_ / total_n_ : 0.0;
  }

  std::vector<bool> run() {
    side_.assign(members_.size(), false);
    greedy();
    local_search();
    return side_;
  }

 private:
  double objective(double n1, double v1) const {
    if (total_n_ == 0) return 0;
    const double size_dev = std::abs(n1 / total_n_ - t_);
    const double ratio_dev = n1 > 0 ? std::abs(v1 / n1 - rho_) : 1.0;
    const double n0 = total_n_ - n1;
    const double ratio_dev0 = n0 > 0 ? std::abs((total_v_ - v1) / n0 - rho_) : 1.0;
    return size_dev + std::max(ratio_dev, ratio_dev0);
  }

  void greedy() {
    // Members arrive shuffled by seed; stable sort keeps that order among equal sizes.
    std::vector<std::size_t> order(members_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return groups_[members_[a]].n > groups_[members_[b]].n; });
    n1_ = v1_ = 0;
    double n0 = 0;
    for (auto k : order) {
      const auto& g = groups_[members_[k]];
      const double def1 = t_ * total_n_ - n1_;
      const double def0 = (1 - t_) * total_n_ - n0;
      if (def1 > def0) {
        side_[k] = true;
        n1_ += static_cast<double>(g.n);
        v1_ += static_cast<double>(g.v);
      } else {
        n0 += static_cast<double>(g.n);
      }
    }
  }

  void local_search() {
    constexpr int kMaxPasses = 50;
    constexpr double kEps = 1e-12;
    const std::size_t m = members_.size();
    for (int pass = 0; pass < kMaxPasses; ++pass) {
      bool improved = false;
      double j = objective(n1_, v1_);
      for (std::size_t k = 0; k < m; ++k) {
        const auto& g = groups_[members_[k]];
        const double sign = side_[k] ? -1.0 : 1.0;
        const double n1 = n1_ + sign * static_cast<double>(g.n);
        const double v1 = v1_ + sign * static_cast<double>(g.v);
        if (n1 <= 0 || n1 >= total_n_) continue;  // never empty a side
        const double jn = objective(n1, v1);
        if (jn < j - kEps) {
          side_[k] = !side_[k];
          n1_ = n1;
          v1_ = v1;
          j = jn;
          improved = true;
        }
      }
      for (std::size_t a = 0; a < m; ++a) {
        if (!side_[a]) continue;
        const auto& ga = groups_[members_[a]];
        for (std::size_t b = 0; b < m && side_[a]; ++b) {
          if (side_[b]) continue;
          const auto& gb = groups_[members_[b]];
          const double n1 = n1_ - static_cast<double>(ga.n) + static_cast<double>(gb.n);
          const double v1 = v1_ - static_cast<double>(ga.v) + static_cast<double>(gb.v);
          if (n1 <= 0 || n1 >= total_n_) continue;
          const double jn = objective(n1, v1);
          if (jn < j - kEps) {
            side_[a] = false;
            side_[b] = true;
            n1_ = n1;
            v1_ = v1;
            j = jn;
            improved = true;
          }
        }
      }
      if (!improved) break;
    }
  }

  const std::vector<Group>& groups_;
  std::vector<std::size_t> members_;
  double t_;
  double total_n_ = 0, total_v_ = 0, rho_ = 0;
  double n1_ = 0, v1_ = 0;
  std::vector<bool> side_;
};

}  // namespace

SplitAssignment split_random(const std::vector<CommitRecord>& records, const SplitOptions& opts) {
  if (records.size() < 3) throw DataError("random split needs at least 3 records");
  auto a = start(SplitStrategy::Random, records, opts);
  std::mt19937_64 rng(opts.seed);
  for (bool vfc : {true, false}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < records.size(); ++i)
      if (records[i].is_vfc() == vfc) idx.push_back(i);
    std::shuffle(idx.begin(), idx.end(), rng);
    cut(idx, opts.fractions, a.splits);
  }
  finish(a, records, opts.tolerance);
  return a;
}

SplitAssignment split_temporal(const std::vector<CommitRecord>& records, const SplitOptions& opts) {
  if (records.size() < 3) throw DataError("temporal split needs at least 3 records");
  auto a = start(SplitStrategy::Temporal, records, opts);
  std::vector<std::size_t> idx(records.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (const auto& r : records)
    if (!r.timestamp) throw DataError("temporal split: record " + r.id() + " has no timestamp");
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    const auto& rx = records[x];
    const auto& ry = records[y];
    if (*rx.timestamp != *ry.timestamp) return *rx.timestamp < *ry.timestamp;
    if (rx.sha != ry.sha) return rx.sha < ry.sha;
    return rx.repo < ry.repo;
  });
  cut(idx, opts.fractions, a.splits);
  finish(a, records, opts.tolerance);
  return a;
}

SplitAssignment split_group_stratified(const std::vector<CommitRecord>& records, const SplitOptions& opts) {
  auto a = start(SplitStrategy::Group, records, opts);
  std::map<std::string, std::size_t> index;
  std::vector<Group> groups;
  std::vector<std::size_t> group_of(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string& gid = records[i].group_id.empty() ? records[i].repo : records[i].group_id;
    auto [it, fresh] = index.try_emplace(gid, groups.size());
    if (fresh) groups.push_back({gid, 0, 0});
    auto& g = groups[it->second];
    ++g.n;
    if (records[i].is_vfc()) ++g.v;
    group_of[i] = it->second;
  }
  if (groups.size() < 3) throw DataError("insufficient groups: need at least 3 distinct group ids");

  // Seeded order over groups sorted by id so the input order does not matter.
  std::vector<std::size_t> all(groups.size());
  std::iota(all.begin(), all.end(), 0);
  std::sort(all.begin(), all.end(), [&](std::size_t x, std::size_t y) { return groups[x].id < groups[y].id; });
  std::mt19937_64 rng(opts.seed);
  std::shuffle(all.begin(), all.end(), rng);

  std::vector<Split> gsplit(groups.size(), Split::Train);
  const auto test_side = Bipartition(groups, all, opts.fractions.test).run();
  std::vector<std::size_t> rest;
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (test_side[k]) gsplit[all[k]] = Split::Test;
    else rest.push_back(all[k]);
  }
  const double val_share = opts.fractions.val / (opts.fractions.train + opts.fractions.val);
  const auto val_side = Bipartition(groups, rest, val_share).run();
  for (std::size_t k = 0; k < rest.size(); ++k)
    if (val_side[k]) gsplit[rest[k]] = Split::Val;

  for (std::size_t i = 0; i < records.size(); ++i) a.splits[i] = gsplit[group_of[i]];
  for (const auto& g : groups)
    if (static_cast<double>(g.n) > 0.1 * static_cast<double>(records.size()))
      a.warnings.push_back(fmt::format("group '{}' holds {:.1f}% of records; balance is best-effort", g.id,
                                       100.0 * static_cast<double>(g.n) / static_cast<double>(records.size())));
  finish(a, records, opts.tolerance);
  return a;
}

SplitAssignment split_cve(const std::vector<CommitRecord>& records, const SplitOptions& opts) {
  auto a = start(SplitStrategy::Cve, records, opts);
  std::vector<std::size_t> cve, benign;
  std::size_t vfc_total = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.is_vfc()) {
      ++vfc_total;
      if (!r.cve_ids.empty()) cve.push_back(i);
    } else {
      benign.push_back(i);
    }
  }
  if (cve.size() < 2) throw DataError(fmt::format("cve split needs at least 2 CVE-mapped VFCs (found {})", cve.size()));
  const double rho = opts.target_ratio.value_or(static_cast<double>(vfc_total) / static_cast<double>(records.size()));
  if (!(rho > 0 && rho <= 1)) throw ConfigError("cve split target ratio must be in (0, 1]");

  std::sort(cve.begin(), cve.end(), [&](std::size_t x, std::size_t y) {
    if (records[x].sha != records[y].sha) return records[x].sha < records[y].sha;
    return records[x].repo < records[y].repo;
  });
  std::array<std::size_t, 2> vcount{0, 0};
  for (std::size_t k = 0; k < cve.size(); ++k) {
    a.splits[cve[k]] = k % 2 == 0 ? Split::Val : Split::Test;
    ++vcount[k % 2];
  }

  std::mt19937_64 rng(opts.seed);
  std::shuffle(benign.begin(), benign.end(), rng);
  std::size_t next = 0;
  for (int side = 0; side < 2; ++side) {
    const auto want = static_cast<std::size_t>(std::llround(static_cast<double>(vcount[side]) * (1 - rho) / rho));
    const std::size_t take = std::min(want, benign.size() - next);
    if (take < want)
      a.warnings.push_back(fmt::format("only {} of {} benign records available for {}", take, want,
                                       side == 0 ? "val" : "test"));
    for (std::size_t k = 0; k < take; ++k) a.splits[benign[next++]] = side == 0 ? Split::Val : Split::Test;
  }
  finish(a, records, opts.tolerance);
  return a;
}

SplitAssignment split(SplitStrategy strategy, const std::vector<CommitRecord>& records, const SplitOptions& opts) {
  switch (strategy) {
    case SplitStrategy::Random: return split_random(records, opts);
    case SplitStrategy::Temporal: return split_temporal(records, opts);
    case SplitStrategy::Group: return split_group_stratified(records, opts);
    case SplitStrategy::Cve: return split_cve(records, opts);
  }
  throw ConfigError("unknown split strategy");
}

}  // namespace vfc::corpus
