#include <algorithm>

#include "vfc/enrich.hpp"
#include "vfc/error.hpp"

namespace vfc::enrich {

namespace {

bool shares(const std::set<std::string>& a, const std::set<std::string>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i;
    else ++j;
  }
  return false;
}

// Multi-source breadth-first walk over def-use edges. Returns the hop
// distance of every statement reached within `d` hops, seeds excluded.
std::map<StatementId, int> walk(const StatementSet& seed, const StatementIR& ir, int d, bool backward) {
  std::map<StatementId, int> dist;
  if (d <= 0) return dist;
  std::vector<bool> seen(ir.size(), false);
  std::vector<StatementId> frontier;
  for (StatementId s : seed.ids)
    if (s < ir.size()) {
      seen[s] = true;
      frontier.push_back(s);
    }
  for (int step = 1; step <= d && !frontier.empty(); ++step) {
    std::vector<StatementId> next;
    for (StatementId s : frontier) {
      const auto& src = ir[s];
      if (backward) {
        for (StatementId t = 0; t < s; ++t)
          if (!seen[t] && shares(ir[t].writes, src.reads)) {
            seen[t] = true;
            dist[t] = step;
            next.push_back(t);
          }
      } else {
        for (StatementId t = s + 1; t < ir.size(); ++t)
          if (!seen[t] && shares(src.writes, ir[t].reads)) {
            seen[t] = true;
            dist[t] = step;
            next.push_back(t);
          }
      }
    }
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }
  return dist;
}

}  // namespace

std::string_view to_string(Level level) {
  switch (level) {
    case Level::cf: return "cf";
    case Level::df1: return "df1";
    case Level::df2: return "df2";
  }
  return "cf";
}

Level level_from_string(std::string_view s) {
  if (s == "cf") return Level::cf;
  if (s == "df1") return Level::df1;
  if (s == "df2") return Level::df2;
  throw ConfigError("unknown enrichment level '" + std::string(s) + "' (expected cf, df1 or df2)");
}

int depth(Level level) { return level == Level::cf ? 0 : level == Level::df1 ? 1 : 2; }

std::string Reason::str() const {
  switch (kind) {
    case Enclosure: return "enclosure";
    case Backward: return "backward d=" + std::to_string(depth);
    case Forward: return "forward d=" + std::to_string(depth);
  }
  return "enclosure";
}

StatementSet backward_slice(const StatementSet& seed, const StatementIR& ir, int d) {
  StatementSet out{seed.side, {}};
  for (auto [id, k] : walk(seed, ir, d, true)) out.ids.insert(id);
  return out;
}

StatementSet forward_slice(const StatementSet& seed, const StatementIR& ir, int d) {
  StatementSet out{seed.side, {}};
  for (auto [id, k] : walk(seed, ir, d, false)) out.ids.insert(id);
  return out;
}

StatementSet control_flow_enclosure(const StatementSet& seed, const StatementIR& ir, bool full_chain) {
  StatementSet out{seed.side, {}};
  for (StatementId s : seed.ids) {
    if (s >= ir.size()) continue;
    const auto& chain = ir[s].enclosure_chain;
    if (chain.empty()) continue;
    if (full_chain) out.ids.insert(chain.begin(), chain.end());
    else out.ids.insert(chain.front());
  }
  return out;
}

std::map<StatementId, Reason> select_context(const StatementSet& seed, const StatementIR& ir, int d, bool full_chain) {
  std::map<StatementId, Reason> out;
  const auto back = walk(seed, ir, d, true);
  const auto fwd = walk(seed, ir, d, false);
  StatementSet reach = seed;
  for (auto [id, k] : back) reach.ids.insert(id);
  for (auto [id, k] : fwd) reach.ids.insert(id);
  for (StatementId id : control_flow_enclosure(reach, ir, full_chain).ids)
    if (!seed.ids.count(id)) out[id] = {Reason::Enclosure, 0};
  for (auto [id, k] : back)
    if (!out.count(id)) out[id] = {Reason::Backward, k};
  for (auto [id, k] : fwd)
    if (!out.count(id)) out[id] = {Reason::Forward, k};
  return out;
}

}  // namespace vfc::enrich
