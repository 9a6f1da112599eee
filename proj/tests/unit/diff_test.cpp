#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "vfc/diff.hpp"
#include "vfc/error.hpp"
#include "vfc/text.hpp"
#include "vfc/tokenizer.hpp"

namespace {

using namespace vfc;
using namespace vfc::diff;

std::string fixture(const char* name) { return vfc::testing::read_text(vfc::testing::fixture_root() / "diffs" / name); }

class RoundTrip : public ::testing::TestWithParam<const char*> {};

TEST_P(RoundTrip, RenderOfParseIsIdentity) {
  const auto text = fixture(GetParam());
  EXPECT_EQ(render_unified_diff(parse_unified_diff(text)), text);
}

INSTANTIATE_TEST_SUITE_P(Canonical, RoundTrip,
                         ::testing::Values("modify.diff", "multi_file.diff", "added.diff", "deleted.diff",
                                           "binary_rename.diff", "no_newline.diff", "format_patch.diff"));

TEST(Parse, HunkCountsAndLineNumbers) {
  const auto d = parse_unified_diff(fixture("modify.diff"));
  ASSERT_EQ(d.files.size(), 1u);
  const auto& f = d.files[0];
  EXPECT_EQ(f.path(), "src/buf.c");
  ASSERT_EQ(f.hunks.size(), 2u);
  EXPECT_EQ(f.hunks[0].old_start, 10);
  EXPECT_EQ(f.hunks[0].old_count, 7);
  EXPECT_EQ(f.hunks[0].new_count, 9);
  EXPECT_EQ(f.hunks[0].section, " int buf_copy(char *dst, const char *src, size_t n)");
  EXPECT_EQ(f.hunks[1].old_count, 1);
  EXPECT_EQ(f.hunks[1].header(), "@@ -40 +42 @@ static int limit = 16;");
  // "-  for ..." is old line 13, "+  if (n == 0)" new line 13
  const auto& removed = f.hunks[0].lines[3];
  EXPECT_EQ(removed.kind, LineKind::Deleted);
  EXPECT_EQ(removed.old_lineno, 13);
  EXPECT_EQ(f.hunks[0].lines[4].new_lineno, 13);
}

TEST(Parse, AddedDeletedBinaryRename) {
  EXPECT_TRUE(parse_unified_diff(fixture("added.diff")).files.at(0).is_added());
  EXPECT_TRUE(parse_unified_diff(fixture("deleted.diff")).files.at(0).is_deleted());
  const auto d = parse_unified_diff(fixture("binary_rename.diff"));
  ASSERT_EQ(d.files.size(), 3u);
  EXPECT_TRUE(d.files[0].is_binary);
  EXPECT_EQ(d.files[1].old_path, "old_name.c");
  EXPECT_EQ(d.files[1].new_path, "new_name.c");
  EXPECT_TRUE(d.files[2].hunks.empty());
}

TEST(Parse, FormatPatchKeepsPreamble) {
  const auto d = parse_unified_diff(fixture("format_patch.diff"));
  EXPECT_FALSE(d.preamble.empty());
  EXPECT_EQ(d.files.size(), 1u);
}

TEST(Parse, CountMismatchThrows) {
  const std::string bad = "--- a/x\n+++ b/x\n@@ -1,3 +1,3 @@\n a\n-b\n+c\n";
  EXPECT_THROW(parse_unified_diff(bad), ParseError);
}

TEST(Render, CountMismatchThrows) {
  auto d = parse_unified_diff(fixture("modify.diff"));
  d.files[0].hunks[0].old_count += 1;
  EXPECT_THROW(render_unified_diff(d), RenderError);
}

TEST(Compute, IdenticalInputsGiveNoHunks) { EXPECT_TRUE(compute_unified_diff("a\nb\n", "a\nb\n").hunks.empty()); }

TEST(Compute, KnownSmallEdit) {
  const auto f = compute_unified_diff("a\nb\nc\n", "a\nx\nc\n", 1);
  ASSERT_EQ(f.hunks.size(), 1u);
  EXPECT_EQ(f.hunks[0].header(), "@@ -1,3 +1,3 @@");
  EXPECT_EQ(render_file_diff(f), "@@ -1,3 +1,3 @@\n a\n-b\n+x\n c\n");
}

TEST(Compute, DistantEditsSplitHunks) {
  std::string pre, post;
  for (int i = 0; i < 30; ++i) {
    pre += "l" + std::to_string(i) + "\n";
    post += (i == 2 || i == 25 ? "m" : "l") + std::to_string(i) + "\n";
  }
  EXPECT_EQ(compute_unified_diff(pre, post, 3).hunks.size(), 2u);
  EXPECT_EQ(compute_unified_diff(pre, post, 20).hunks.size(), 1u);
}

TEST(Apply, RandomEditsReproducePost) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 100; ++round) {
    std::vector<std::string> lines;
    for (int i = 0; i < 20; ++i) lines.push_back("v" + std::to_string(rng() % 8));
    auto edited = lines;
    for (int e = 0; e < 4; ++e) {
      const auto at = static_cast<std::ptrdiff_t>(rng() % (edited.size() + 1));
      if (rng() % 2 && at < static_cast<std::ptrdiff_t>(edited.size())) edited.erase(edited.begin() + at);
      else edited.insert(edited.begin() + at, "n" + std::to_string(rng() % 8));
    }
    std::string pre, post;
    for (const auto& l : lines) pre += l + "\n";
    for (const auto& l : edited) post += l + "\n";
    EXPECT_EQ(apply_file_diff(pre, compute_unified_diff(pre, post)), post);
  }
}

TEST(Apply, MismatchedContextThrows) {
  const auto f = compute_unified_diff("a\nb\nc\n", "a\nx\nc\n");
  EXPECT_THROW(apply_file_diff("a\nq\nc\n", f), DataError);
}

TEST(Align, CoversBothSidesOnce) {
  const auto rows = align_lines("a\nb\nc\n", "b\nc\nd\n");
  int old_seen = 0, new_seen = 0;
  for (const auto& r : rows) {
    old_seen += r.old_index >= 0;
    new_seen += r.new_index >= 0;
  }
  EXPECT_EQ(old_seen, 3);
  EXPECT_EQ(new_seen, 3);
}

TEST(TokenBudget, ClassesAddUp) {
  // builtin: "-x = 1;" body "x = 1;" -> x, =, 1, ; = 4 tokens
  const std::string text = "--- a/f\n+++ b/f\n@@ -1 +1 @@\n-x = 1;\n+x = 2;\n";
  const auto c = classify_token_budget(parse_unified_diff(text, std::string("fix it")), Tokenizer::builtin());
  EXPECT_EQ(c.change, 8u);
  EXPECT_EQ(c.message, 2u);
  EXPECT_EQ(c.context, 0u);
  const auto tok = Tokenizer::builtin();
  EXPECT_EQ(c.header, tok.count("--- a/f") + tok.count("+++ b/f") + tok.count("@@ -1 +1 @@"));
}

TEST(Tokenizer, BuiltinSplitsPunctuation) {
  const auto t = Tokenizer::builtin();
  EXPECT_EQ(t.count(""), 0u);
  EXPECT_EQ(t.count("a+b"), 3u);
  EXPECT_EQ(t.count("foo_bar(x, 42);"), 7u);
}

TEST(Tokenizer, VocabLongestMatch) {
  const auto t = Tokenizer::from_vocab({"buf", "buffer", "er"});
  EXPECT_EQ(t.count("buffer"), 1u);
  EXPECT_EQ(t.count("bufer"), 2u);
  EXPECT_EQ(t.count("zz"), 2u);
}

TEST(Text, SplitLinesAndTrim) {
  EXPECT_EQ(split_lines("a\nb").size(), 2u);
  EXPECT_EQ(trim("  x \t"), "x");
  EXPECT_EQ(collapse_whitespace("a   b\t c"), "a b c");
}

}  // namespace
