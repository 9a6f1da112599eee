#include "vfc/structdiff.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <unordered_map>

#include "vfc/text.hpp"

namespace vfc::structdiff {

using syntax::kNoNode;
using syntax::Node;
using syntax::SyntaxTree;

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::Insert: return "Insert";
    case ActionKind::Delete: return "Delete";
    case ActionKind::Update: return "Update";
    case ActionKind::Move: return "Move";
  }
  return "?";
}

namespace {

// Per-tree metrics. Ids are pre-order, so the descendants of n are exactly
// (n, n + size[n]).
struct Index {
  const SyntaxTree* tree = nullptr;
  std::vector<int> height;
  std::vector<std::uint32_t> size;
  std::vector<std::uint64_t> hash;
  std::vector<std::uint32_t> post_rank;

  explicit Index(const SyntaxTree& t) : tree(&t) {
    const std::size_t n = t.size();
    height.assign(n, 1);
    size.assign(n, 1);
    hash.assign(n, 0);
    post_rank.assign(n, 0);
    const auto order = t.post_order();
    for (std::uint32_t r = 0; r < order.size(); ++r) {
      const NodeId id = order[r];
      post_rank[id] = r;
      const Node& node = t.node(id);
      std::uint64_t h = fnv1a64(node.kind);
      h = fnv1a64(node.label, h ^ 0x9e3779b97f4a7c15ULL);
      for (NodeId c : node.children) {
        height[id] = std::max(height[id], height[c] + 1);
        size[id] += size[c];
        h = (h ^ hash[c]) * 0x100000001b3ULL;
      }
      hash[id] = h;
    }
  }

  const Node& node(NodeId id) const { return tree->node(id); }
  bool contains(NodeId anc, NodeId d) const { return d >= anc && d < anc + size[anc]; }
};

bool isomorphic(const Index& a, NodeId x, const Index& b, NodeId y) {
  if (a.hash[x] != b.hash[y] || a.size[x] != b.size[y]) return false;
  for (std::uint32_t k = 0; k < a.size[x]; ++k) {
    const Node& p = a.node(x + k);
    const Node& q = b.node(y + k);
    if (p.kind != q.kind || p.label != q.label || p.children.size() != q.children.size()) return false;
  }
  return true;
}

class Matcher {
 public:
  Matcher(const SyntaxTree& pre, const SyntaxTree& post, MatchOptions opt)
      : a_(pre), b_(post), opt_(opt), a2b_(pre.size(), kNoNode), b2a_(post.size(), kNoNode) {}

  EditMapping run() {
    if (!a_.tree->empty() && !b_.tree->empty()) {
      top_down();
      bottom_up();
    }
    EditMapping m;
    m.pre_to_post = a2b_;
    m.post_to_pre = b2a_;
    for (NodeId x = 0; x < a2b_.size(); ++x)
      if (a2b_[x] != kNoNode) m.pairs.emplace_back(x, a2b_[x]);
    m.actions = actions();
    return m;
  }

 private:
  void link(NodeId x, NodeId y) {
    a2b_[x] = y;
    b2a_[y] = x;
  }

  void link_subtree(NodeId x, NodeId y) {
    for (std::uint32_t k = 0; k < a_.size[x]; ++k) link(x + k, y + k);
  }

  int line_gap(NodeId x, NodeId y) const { return std::abs(a_.node(x).line_begin - b_.node(y).line_begin); }

  // ---- phase 1 ----------------------------------------------------------
  void top_down() {
    std::map<int, std::vector<NodeId>, std::greater<>> l1, l2;
    l1[a_.height[0]].push_back(0);
    l2[b_.height[0]].push_back(0);
    auto open = [](std::map<int, std::vector<NodeId>, std::greater<>>& l, const Index& ix, NodeId n) {
      for (NodeId c : ix.node(n).children) l[ix.height[c]].push_back(c);
    };
    std::vector<std::pair<NodeId, NodeId>> candidates;
    while (!l1.empty() && !l2.empty()) {
      const int h1 = l1.begin()->first;
      const int h2 = l2.begin()->first;
      if (std::min(h1, h2) < opt_.min_height) break;
      if (h1 != h2) {
        auto& l = h1 > h2 ? l1 : l2;
        const Index& ix = h1 > h2 ? a_ : b_;
        auto nodes = std::move(l.begin()->second);
        l.erase(l.begin());
        for (NodeId n : nodes) open(l, ix, n);
        continue;
      }
      auto hs1 = std::move(l1.begin()->second);
      auto hs2 = std::move(l2.begin()->second);
      l1.erase(l1.begin());
      l2.erase(l2.begin());
      std::unordered_map<std::uint64_t, std::pair<std::vector<NodeId>, std::vector<NodeId>>> groups;
      for (NodeId x : hs1) groups[a_.hash[x]].first.push_back(x);
      for (NodeId y : hs2) groups[b_.hash[y]].second.push_back(y);
      std::vector<bool> used1(hs1.size(), false), used2(hs2.size(), false);
      std::unordered_map<NodeId, std::size_t> pos1, pos2;
      for (std::size_t i = 0; i < hs1.size(); ++i) pos1[hs1[i]] = i;
      for (std::size_t i = 0; i < hs2.size(); ++i) pos2[hs2[i]] = i;
      for (auto& [h, g] : groups) {
        auto& [g1, g2] = g;
        std::vector<std::pair<NodeId, NodeId>> iso;
        for (NodeId x : g1)
          for (NodeId y : g2)
            if (isomorphic(a_, x, b_, y)) iso.emplace_back(x, y);
        for (auto [x, y] : iso) {
          used1[pos1[x]] = true;
          used2[pos2[y]] = true;
        }
        if (iso.size() == 1 && g1.size() == 1 && g2.size() == 1)
          link_subtree(iso[0].first, iso[0].second);
        else
          candidates.insert(candidates.end(), iso.begin(), iso.end());
      }
      for (std::size_t i = 0; i < hs1.size(); ++i)
        if (!used1[i]) open(l1, a_, hs1[i]);
      for (std::size_t i = 0; i < hs2.size(); ++i)
        if (!used2[i]) open(l2, b_, hs2[i]);
    }
    std::sort(candidates.begin(), candidates.end(), [&](const auto& p, const auto& q) {
      const int gp = line_gap(p.first, p.second), gq = line_gap(q.first, q.second);
      if (gp != gq) return gp < gq;
      if (a_.post_rank[p.first] != a_.post_rank[q.first]) return a_.post_rank[p.first] < a_.post_rank[q.first];
      return b_.post_rank[p.second] < b_.post_rank[q.second];
    });
    for (auto [x, y] : candidates)
      if (a2b_[x] == kNoNode && b2a_[y] == kNoNode) link_subtree(x, y);
  }

  // ---- phase 2 ----------------------------------------------------------
  double dice(NodeId x, NodeId y) const {
    const std::uint32_t d1 = a_.size[x] - 1, d2 = b_.size[y] - 1;
    if (d1 + d2 == 0) return 0.0;
    std::uint32_t common = 0;
    for (NodeId d = x + 1; d < x + a_.size[x]; ++d)
      if (a2b_[d] != kNoNode && b_.contains(y, a2b_[d])) ++common;
    return 2.0 * common / (d1 + d2);
  }

  void bottom_up() {
    for (NodeId x : a_.tree->post_order()) {
      if (x == 0) break;
      if (a2b_[x] != kNoNode || a_.node(x).is_leaf()) continue;
      std::vector<NodeId> cands;
      for (NodeId d = x + 1; d < x + a_.size[x]; ++d) {
        if (a2b_[d] == kNoNode) continue;
        for (NodeId p = b_.node(a2b_[d]).parent; p != kNoNode && p != 0; p = b_.node(p).parent)
          if (b2a_[p] == kNoNode && b_.node(p).kind == a_.node(x).kind) cands.push_back(p);
      }
      std::sort(cands.begin(), cands.end());
      cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
      NodeId best = kNoNode;
      double best_sim = -1;
      for (NodeId y : cands) {
        const double s = dice(x, y);
        if (s < opt_.sim_threshold) continue;
        const bool better = s > best_sim ||
                            (s == best_sim && (line_gap(x, y) < line_gap(x, best) ||
                                               (line_gap(x, y) == line_gap(x, best) &&
                                                b_.post_rank[y] < b_.post_rank[best])));
        if (better) {
          best = y;
          best_sim = s;
        }
      }
      if (best != kNoNode) {
        link(x, best);
        recover(x, best);
      }
    }
    if (a2b_[0] == kNoNode && b2a_[0] == kNoNode && a_.node(0).kind == b_.node(0).kind) link(0, 0);
    if (a2b_[0] == 0) recover(0, 0);
  }

  template <class Eq>
  std::vector<std::pair<NodeId, NodeId>> lcs(const std::vector<NodeId>& s1, const std::vector<NodeId>& s2, Eq eq) {
    const std::size_t n = s1.size(), m = s2.size();
    std::vector<std::vector<std::uint16_t>> dp(n + 1, std::vector<std::uint16_t>(m + 1, 0));
    for (std::size_t i = n; i-- > 0;)
      for (std::size_t j = m; j-- > 0;)
        dp[i][j] = eq(s1[i], s2[j]) ? dp[i + 1][j + 1] + 1 : std::max(dp[i + 1][j], dp[i][j + 1]);
    std::vector<std::pair<NodeId, NodeId>> out;
    for (std::size_t i = 0, j = 0; i < n && j < m;) {
      if (eq(s1[i], s2[j])) {
        out.emplace_back(s1[i++], s2[j++]);
      } else if (dp[i + 1][j] >= dp[i][j + 1]) {
        ++i;
      } else {
        ++j;
      }
    }
    return out;
  }

  std::vector<NodeId> unmatched_children(const Index& ix, NodeId n, const std::vector<NodeId>& map) const {
    std::vector<NodeId> out;
    for (NodeId c : ix.node(n).children)
      if (map[c] == kNoNode) out.push_back(c);
    return out;
  }

  void recover(NodeId x, NodeId y) {
    auto c1 = unmatched_children(a_, x, a2b_);
    auto c2 = unmatched_children(b_, y, b2a_);
    if (c1.empty() || c2.empty()) return;
    if (c1.size() > 4000 || c2.size() > 4000) return;
    for (auto [p, q] : lcs(c1, c2, [&](NodeId p, NodeId q) { return isomorphic(a_, p, b_, q); }))
      link_subtree(p, q);
    c1 = unmatched_children(a_, x, a2b_);
    c2 = unmatched_children(b_, y, b2a_);
    for (auto [p, q] : lcs(c1, c2, [&](NodeId p, NodeId q) {
           return a_.node(p).kind == b_.node(q).kind && a_.node(p).label == b_.node(q).label;
         })) {
      link(p, q);
      recover(p, q);
    }
    c1 = unmatched_children(a_, x, a2b_);
    c2 = unmatched_children(b_, y, b2a_);
    std::map<std::string_view, std::pair<std::vector<NodeId>, std::vector<NodeId>>> hist;
    for (NodeId p : c1) hist[a_.node(p).kind].first.push_back(p);
    for (NodeId q : c2) hist[b_.node(q).kind].second.push_back(q);
    std::vector<std::pair<NodeId, NodeId>> unique;
    for (auto& [k, g] : hist)
      if (g.first.size() == 1 && g.second.size() == 1) unique.emplace_back(g.first[0], g.second[0]);
    std::sort(unique.begin(), unique.end());
    for (auto [p, q] : unique) {
      link(p, q);
      recover(p, q);
    }
  }

  // ---- actions ----------------------------------------------------------
  Action make(ActionKind k, NodeId x, NodeId y) const {
    Action act;
    act.kind = k;
    act.pre = x;
    act.post = y;
    if (x != kNoNode) act.pre_span = a_.node(x).span;
    if (y != kNoNode) act.post_span = b_.node(y).span;
    return act;
  }

  std::vector<Action> actions() const {
    std::vector<Action> out;
    std::vector<bool> moved(a2b_.size(), false);
    // Parent changes.
    for (NodeId x = 1; x < a2b_.size(); ++x) {
      const NodeId y = a2b_[x];
      if (y == kNoNode || y == 0) continue;
      const NodeId px = a_.node(x).parent;
      const NodeId py = b_.node(y).parent;
      if (a2b_[px] != py) moved[x] = true;
    }
    // Sibling reorders under matched parents.
    for (NodeId x = 0; x < a2b_.size(); ++x) {
      const NodeId y = a2b_[x];
      if (y == kNoNode || a_.node(x).is_leaf()) continue;
      std::vector<NodeId> s1, s2;
      for (NodeId c : a_.node(x).children)
        if (a2b_[c] != kNoNode && b_.node(a2b_[c]).parent == y) s1.push_back(c);
      for (NodeId c : b_.node(y).children)
        if (b2a_[c] != kNoNode && a_.node(b2a_[c]).parent == x) s2.push_back(c);
      if (s1.size() < 2) continue;
      // Longest increasing run of partner positions keeps its place.
      std::vector<std::size_t> pos_in_s2(b_.tree->size(), 0);
      for (std::size_t j = 0; j < s2.size(); ++j) pos_in_s2[s2[j]] = j;
      std::vector<std::size_t> seq;
      for (NodeId c : s1) seq.push_back(pos_in_s2[a2b_[c]]);
      std::vector<std::size_t> len(seq.size(), 1), prev(seq.size(), SIZE_MAX);
      std::size_t best = 0;
      for (std::size_t i = 0; i < seq.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
          if (seq[j] < seq[i] && len[j] + 1 > len[i]) {
            len[i] = len[j] + 1;
            prev[i] = j;
          }
        if (len[i] > len[best]) best = i;
      }
      std::vector<bool> keep(seq.size(), false);
      for (std::size_t i = best; i != SIZE_MAX; i = prev[i]) keep[i] = true;
      for (std::size_t i = 0; i < seq.size(); ++i)
        if (!keep[i]) moved[s1[i]] = true;
    }
    for (NodeId x = 0; x < a2b_.size(); ++x) {
      const NodeId y = a2b_[x];
      if (y == kNoNode) {
        out.push_back(make(ActionKind::Delete, x, kNoNode));
        continue;
      }
      if (a_.node(x).label != b_.node(y).label) out.push_back(make(ActionKind::Update, x, y));
      if (moved[x]) out.push_back(make(ActionKind::Move, x, y));
    }
    for (NodeId y = 0; y < b2a_.size(); ++y)
      if (b2a_[y] == kNoNode) out.push_back(make(ActionKind::Insert, kNoNode, y));
    return out;
  }

  Index a_;
  Index b_;
  MatchOptions opt_;
  std::vector<NodeId> a2b_;
  std::vector<NodeId> b2a_;
};

bool overlaps(const syntax::StatementEntry& s, ByteRange r) {
  for (const auto& seg : s.segments) {
    if (seg.contains(r)) return true;
    if (r.end > r.begin && r.contains(seg)) return true;
  }
  return false;
}

void mark(const syntax::StatementIR& ir, ByteRange r, std::set<StatementId>& out) {
  for (const auto& s : ir.statements)
    if (overlaps(s, r)) out.insert(s.id);
}

}  // namespace

EditMapping match_trees(const SyntaxTree& pre, const SyntaxTree& post, MatchOptions options) {
  return Matcher(pre, post, options).run();
}

std::pair<StatementSet, StatementSet> changed_statements(const EditMapping& mapping, const syntax::StatementIR& pre_ir,
                                                         const syntax::StatementIR& post_ir) {
  StatementSet pre{Side::Pre, {}};
  StatementSet post{Side::Post, {}};
  for (const auto& a : mapping.actions) {
    if (a.pre != kNoNode) mark(pre_ir, a.pre_span, pre.ids);
    if (a.post != kNoNode) mark(post_ir, a.post_span, post.ids);
  }
  return {pre, post};
}

std::string dump_actions(const EditMapping& mapping, const SyntaxTree& pre, const SyntaxTree& post) {
  std::string out;
  auto describe = [](const SyntaxTree& t, NodeId n) {
    const Node& node = t.node(n);
    std::string s = node.kind;
    if (!node.label.empty()) s += " \"" + node.label + "\"";
    return s + " @" + std::to_string(node.line_begin);
  };
  for (const auto& a : mapping.actions) {
    out += std::string(to_string(a.kind)) + ' ';
    switch (a.kind) {
      case ActionKind::Insert: out += describe(post, a.post); break;
      case ActionKind::Delete: out += describe(pre, a.pre); break;
      case ActionKind::Update:
        out += describe(pre, a.pre) + " -> \"" + post.node(a.post).label + "\"";
        break;
      case ActionKind::Move: out += describe(pre, a.pre) + " -> " + describe(post, a.post); break;
    }
    out += '\n';
  }
  return out;
}

}  // namespace vfc::structdiff
