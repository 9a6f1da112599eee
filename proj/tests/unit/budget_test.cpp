#include <gtest/gtest.h>

#include "synth.hpp"
#include "vfc/budget.hpp"
#include "vfc/error.hpp"
#include "vfc/tokenizer.hpp"

namespace {

using namespace vfc;
using namespace vfc::budget;

DocLine line(LineClass c, std::string text, int file = 0) {
  const char* prefix = c == LineClass::Change ? "+" : c == LineClass::Context ? " " : "";
  return {c, std::move(text), prefix, c == LineClass::Message ? -1 : file};
}

// Every text below is a run of single-letter words, so its builtin token
// count is its word count.
Document small_doc() {
  Document d;
  d.lines = {line(LineClass::Message, "m m"),
             line(LineClass::Header, "h h"),
             line(LineClass::Context, "far far far"),  // distance 3
             line(LineClass::Context, "c c"),          // distance 2
             line(LineClass::Context, "n"),            // distance 1
             line(LineClass::Change, "x x x x"),
             line(LineClass::Context, "a")};           // distance 1
  return d;
}

TEST(Counts, PerClass) {
  const auto c = count_tokens(small_doc(), Tokenizer::builtin());
  EXPECT_EQ(c.message, 2u);
  EXPECT_EQ(c.header, 2u);
  EXPECT_EQ(c.context, 7u);
  EXPECT_EQ(c.change, 4u);
  EXPECT_EQ(c.total(), 15u);
}

TEST(ContextAware, UnderLimitIsUntouched) {
  const auto t = truncate_context_aware(small_doc(), 15, Tokenizer::builtin());
  EXPECT_FALSE(t.report.affected);
  EXPECT_EQ(t.doc.render(), small_doc().render());
}

TEST(ContextAware, FarthestContextGoesFirst) {
  const auto t = truncate_context_aware(small_doc(), 12, Tokenizer::builtin());
  EXPECT_EQ(t.report.removed.context, 3u);
  EXPECT_EQ(t.report.removed.change, 0u);
  EXPECT_EQ(t.doc.lines.size(), 6u);
  EXPECT_EQ(t.doc.lines[2].text, "c c");
}

TEST(ContextAware, HeadersThenMessageThenChange) {
  const auto tok = Tokenizer::builtin();
  auto t = truncate_context_aware(small_doc(), 6, tok);
  EXPECT_EQ(t.report.removed.context, 7u);
  EXPECT_EQ(t.report.removed.header, 2u);
  EXPECT_EQ(t.report.removed.message, 0u);
  t = truncate_context_aware(small_doc(), 2, tok);
  EXPECT_EQ(t.report.removed.message, 2u);
  EXPECT_EQ(t.report.removed.change, 2u);
  EXPECT_DOUBLE_EQ(t.report.discarded_change_fraction, 2.0 / 4.0);
  EXPECT_DOUBLE_EQ(t.report.change_share_of_removed, 2.0 / 13.0);
  EXPECT_EQ(count_tokens(t.doc, tok).total(), 2u);
}

TEST(Naive, KeepsTokenPrefix) {
  const auto tok = Tokenizer::builtin();
  const auto t = truncate_naive(small_doc(), 9, tok);
  EXPECT_EQ(count_tokens(t.doc, tok).total(), 9u);
  // m m | h h | far far far | c c -> 9 tokens, nothing of the change kept
  EXPECT_EQ(t.report.removed.change, 4u);
  EXPECT_DOUBLE_EQ(t.report.discarded_change_fraction, 1.0);
}

TEST(Budget, ZeroLimitRejected) {
  EXPECT_THROW(truncate_context_aware(small_doc(), 0, Tokenizer::builtin()), ConfigError);
  EXPECT_THROW(truncate_naive(small_doc(), 0, Tokenizer::builtin()), ConfigError);
}

TEST(Budget, ReportJson) {
  const auto j = truncate_naive(small_doc(), 9, Tokenizer::builtin()).report.to_json();
  EXPECT_EQ(j["limit"], 9);
  EXPECT_EQ(j["removed_tokens"]["change"], 4);
}

TEST(Budget, ContextAwareNeverWorseOnAdversarialDocs) {
  const auto tok = Tokenizer::builtin();
  for (const auto& d : vfc::testing::generate_adversarial_documents(10, 1)) {
    for (std::size_t limit : {512u, 2048u}) {
      const auto ca = truncate_context_aware(d, limit, tok);
      const auto nv = truncate_naive(d, limit, tok);
      EXPECT_LE(ca.report.discarded_change_fraction, nv.report.discarded_change_fraction);
      EXPECT_LE(count_tokens(ca.doc, tok).total(), limit);
    }
  }
}

TEST(Document, FromCommitDiffClassifiesLines) {
  auto cd = diff::parse_unified_diff("--- a/f\n+++ b/f\n@@ -1,2 +1,2 @@\n a\n-b\n+c\n", std::string("msg"));
  const auto d = Document::from_commit_diff(cd);
  ASSERT_EQ(d.lines.size(), 7u);
  EXPECT_EQ(d.lines[0].cls, LineClass::Message);
  EXPECT_EQ(d.lines[3].cls, LineClass::Header);
  EXPECT_EQ(d.lines[4].cls, LineClass::Context);
  EXPECT_EQ(d.lines[5].cls, LineClass::Change);
}

}  // namespace
