#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "vfc/enrich.hpp"

namespace vfc::testing {

/// Statement sets (first line of each statement) and rendered hunk lines of
/// one enrichment level.
struct LevelOutcome {
  std::set<int> pre_changed, post_changed, pre_context, post_context;
  std::vector<std::string> render;  // hunk headers and lines, file headers dropped

  friend bool operator==(const LevelOutcome&, const LevelOutcome&) = default;
};

std::string describe(const LevelOutcome& o);
inline void PrintTo(const LevelOutcome& o, std::ostream* os) { *os << "\n" << describe(o); }

struct EnrichFixture {
  std::string name;
  std::string pre, post;
  std::map<std::string, LevelOutcome> expected;  // "cf", "df1", "df2"
};

std::filesystem::path fixture_root();
std::vector<EnrichFixture> load_enrich_fixtures();
LevelOutcome run_enrich_fixture(const EnrichFixture& f, enrich::Level level);

std::string read_text(const std::filesystem::path& p);

}  // namespace vfc::testing
