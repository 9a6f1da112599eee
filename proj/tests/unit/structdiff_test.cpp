#include <gtest/gtest.h>

#include <random>

#include "synth.hpp"
#include "vfc/structdiff.hpp"

namespace {

using namespace vfc;
using namespace vfc::structdiff;
using syntax::Language;
using syntax::parse_source;

TEST(Match, IdenticalTreesHaveNoActions) {
  const auto a = parse_source("int f(int x) {\n  return x + 1;\n}\n", Language::C);
  const auto b = parse_source("int f(int x) {\n  return x + 1;\n}\n", Language::C);
  const auto m = match_trees(a, b);
  EXPECT_TRUE(m.actions.empty());
  EXPECT_EQ(m.pairs.size(), a.size());
}

TEST(Match, EmptyPreGivesOnlyInserts) {
  const auto a = parse_source("", Language::C);
  const auto b = parse_source("int f(void) {\n  return 0;\n}\n", Language::C);
  const auto m = match_trees(a, b);
  ASSERT_FALSE(m.actions.empty());
  for (const auto& act : m.actions) EXPECT_EQ(act.kind, ActionKind::Insert);
}

TEST(Match, IdentifierRenameIsOneUpdate) {
  const auto a = parse_source("int f(int x) {\n  int y = x;\n  return y;\n}\n", Language::C);
  const auto b = parse_source("int f(int x) {\n  int y = x;\n  return w;\n}\n", Language::C);
  const auto m = match_trees(a, b);
  ASSERT_EQ(m.actions.size(), 1u);
  EXPECT_EQ(m.actions[0].kind, ActionKind::Update);
  EXPECT_EQ(a.node(m.actions[0].pre).label, "y");
  EXPECT_EQ(b.node(m.actions[0].post).label, "w");
  EXPECT_NE(dump_actions(m, a, b).find("Update"), std::string::npos);
}

TEST(ChangedStatements, EmptyActionsGiveEmptySets) {
  const auto a = parse_source("int f(int x) {\n  return x;\n}\n", Language::C);
  const auto m = match_trees(a, a);
  const auto ir = syntax::build_statement_ir(a);
  auto [pre, post] = changed_statements(m, ir, ir);
  EXPECT_TRUE(pre.ids.empty());
  EXPECT_TRUE(post.ids.empty());
}

TEST(ChangedStatements, DeletedStatementIsPreOnly) {
  const auto a = parse_source("void f(int x) {\n  g(x);\n  h(x);\n  k(x);\n}\n", Language::C);
  const auto b = parse_source("void f(int x) {\n  g(x);\n  k(x);\n}\n", Language::C);
  const auto m = match_trees(a, b);
  auto [pre, post] = changed_statements(m, syntax::build_statement_ir(a), syntax::build_statement_ir(b));
  EXPECT_EQ(pre.ids, (std::set<StatementId>{1}));
  EXPECT_TRUE(post.ids.empty());
}

TEST(ChangedStatements, RenameMarksBothSides) {
  const auto a = parse_source("void f(int x) {\n  g(x);\n  h(x);\n}\n", Language::C);
  const auto b = parse_source("void f(int x) {\n  g(x);\n  q(x);\n}\n", Language::C);
  const auto m = match_trees(a, b);
  auto [pre, post] = changed_statements(m, syntax::build_statement_ir(a), syntax::build_statement_ir(b));
  EXPECT_EQ(pre.ids, (std::set<StatementId>{1}));
  EXPECT_EQ(post.ids, (std::set<StatementId>{1}));
}

TEST(Properties, KindConsistentInjectiveDeterministic) {
  auto corpus = vfc::testing::generate_commit_corpus(40, 11);
  for (const auto& r : corpus.records) {
    const auto d = diff::parse_unified_diff(r.diff);
    for (const auto& f : d.files) {
      const auto pre = corpus.snapshots.fetch(r.repo, r.sha, corpus::SnapshotSide::Pre, f.path());
      const auto post = corpus.snapshots.fetch(r.repo, r.sha, corpus::SnapshotSide::Post, f.path());
      const auto a = parse_source(*pre, Language::C);
      const auto b = parse_source(*post, Language::C);
      const auto m = match_trees(a, b);
      std::set<syntax::NodeId> seen_pre, seen_post;
      for (auto [p, q] : m.pairs) {
        EXPECT_EQ(a.node(p).kind, b.node(q).kind);
        EXPECT_TRUE(seen_pre.insert(p).second);
        EXPECT_TRUE(seen_post.insert(q).second);
      }
      const auto again = match_trees(a, b);
      EXPECT_EQ(again.pairs, m.pairs);
      EXPECT_FALSE(m.actions.empty());
    }
  }
}

}  // namespace
