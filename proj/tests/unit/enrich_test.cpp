#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "synth.hpp"
#include "vfc/error.hpp"

namespace {

using namespace vfc;
using vfc::testing::describe;

TEST(EnrichFixtures, CorpusHasTwentyFive) { EXPECT_EQ(vfc::testing::load_enrich_fixtures().size(), 25u); }

TEST(EnrichFixtures, AllLevelsMatchExpectations) {
  for (const auto& f : vfc::testing::load_enrich_fixtures()) {
    for (auto level : {enrich::Level::cf, enrich::Level::df1, enrich::Level::df2}) {
      const std::string name(enrich::to_string(level));
      ASSERT_TRUE(f.expected.count(name)) << f.name << " lacks [" << name << "]";
      const auto got = vfc::testing::run_enrich_fixture(f, level);
      EXPECT_EQ(got, f.expected.at(name)) << f.name << " [" << name << "]\n--- expected\n"
                                          << describe(f.expected.at(name)) << "--- got\n"
                                          << describe(got);
    }
  }
}

TEST(Enrich, MissingSnapshotDegradesToRawDiff) {
  corpus::MemorySnapshotProvider empty;
  corpus::CommitRecord r;
  r.repo = "example.org/a/b";
  r.sha = std::string(40, 'a');
  r.diff = "diff --git a/x.c b/x.c\n--- a/x.c\n+++ b/x.c\n@@ -1 +1 @@\n-int a = 1; // old\n+int a = 2;\n";
  const auto e = enrich::enrich_commit(r, empty, {});
  EXPECT_TRUE(e.has_fallback());
  ASSERT_EQ(e.files.size(), 1u);
  EXPECT_EQ(e.files[0].fallback, syntax::FileFallback::MissingSnapshot);
  const auto text = e.render();
  EXPECT_NE(text.find("+int a = 2;"), std::string::npos);
  const auto j = e.to_json();
  EXPECT_EQ(j["level"], "cf");
  EXPECT_TRUE(j.contains("files"));
}

TEST(Enrich, UnparseableDiffThrows) {
  corpus::MemorySnapshotProvider empty;
  EXPECT_THROW(enrich::enrich_diff("--- a/x\n+++ b/x\n@@ -1,5 +1 @@\n-a\n", empty, "r", "s", {}),
               ParseError);
}

TEST(Enrich, LevelsAreNested) {
  auto corpus = vfc::testing::generate_commit_corpus(30, 5);
  for (const auto& r : corpus.records) {
    std::vector<std::set<std::string>> keys;
    for (auto level : {enrich::Level::cf, enrich::Level::df1, enrich::Level::df2}) {
      enrich::EnrichOptions o;
      o.level = level;
      std::set<std::string> k;
      for (const auto& t : enrich::enrich_commit(r, corpus.snapshots, o).functions) {
        for (const auto& [id, reason] : t.pre_context) k.insert(t.path + t.name + "-" + std::to_string(id));
        for (const auto& [id, reason] : t.post_context) k.insert(t.path + t.name + "+" + std::to_string(id));
      }
      keys.push_back(std::move(k));
    }
    EXPECT_TRUE(std::includes(keys[1].begin(), keys[1].end(), keys[0].begin(), keys[0].end()));
    EXPECT_TRUE(std::includes(keys[2].begin(), keys[2].end(), keys[1].begin(), keys[1].end()));
  }
}

}  // namespace
