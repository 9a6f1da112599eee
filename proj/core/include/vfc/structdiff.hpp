#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vfc/syntax.hpp"

namespace vfc::structdiff {

using syntax::ByteRange;
using syntax::NodeId;
using syntax::StatementId;

enum class ActionKind { Insert, Delete, Update, Move };

std::string_view to_string(ActionKind kind);

/// One edit action. Insert names a post node; Delete a pre node; Update and
/// Move name both. Spans are copied so statement extraction needs no trees.
struct Action {
  ActionKind kind = ActionKind::Update;
  NodeId pre = syntax::kNoNode;
  NodeId post = syntax::kNoNode;
  ByteRange pre_span;
  ByteRange post_span;
};

struct MatchOptions {
  int min_height = 2;
  double sim_threshold = 0.5;
};

struct EditMapping {
  std::vector<std::pair<NodeId, NodeId>> pairs;  // sorted by pre node
  std::vector<Action> actions;
  std::vector<NodeId> pre_to_post;  // kNoNode when unmatched
  std::vector<NodeId> post_to_pre;

  NodeId partner_of_pre(NodeId n) const { return n < pre_to_post.size() ? pre_to_post[n] : syntax::kNoNode; }
  NodeId partner_of_post(NodeId n) const { return n < post_to_pre.size() ? post_to_pre[n] : syntax::kNoNode; }
};

/// Greedy top-down matching of isomorphic subtrees followed by bottom-up
/// container matching with a simple recovery pass. Deterministic.
EditMapping match_trees(const syntax::SyntaxTree& pre, const syntax::SyntaxTree& post, MatchOptions options = {});

enum class Side { Pre, Post };

struct StatementSet {
  Side side = Side::Pre;
  std::set<StatementId> ids;
  friend bool operator==(const StatementSet&, const StatementSet&) = default;
};

/// Statements touched by an action, per side. Update and Move mark both.
std::pair<StatementSet, StatementSet> changed_statements(const EditMapping& mapping, const syntax::StatementIR& pre_ir,
                                                         const syntax::StatementIR& post_ir);

/// One line per action, e.g. `Update identifier "y" -> "w" @3`.
std::string dump_actions(const EditMapping& mapping, const syntax::SyntaxTree& pre, const syntax::SyntaxTree& post);

}  // namespace vfc::structdiff
