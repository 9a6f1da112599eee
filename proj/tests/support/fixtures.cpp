#include "fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "vfc/diff.hpp"
#include "vfc/snapshot.hpp"
#include "vfc/text.hpp"

#ifndef VFC_FIXTURE_DIR
#error "VFC_FIXTURE_DIR must be defined"
#endif

namespace vfc::testing {

namespace fs = std::filesystem;

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fixture_root() { return VFC_FIXTURE_DIR; }

namespace {

std::set<int> parse_set(std::string_view v) {
  std::set<int> out;
  for (const auto& tok : split(trim(v), ' '))
    if (!trim(tok).empty()) out.insert(std::stoi(std::string(trim(tok))));
  return out;
}

std::map<std::string, LevelOutcome> parse_expected(const std::string& text) {
  std::map<std::string, LevelOutcome> out;
  LevelOutcome* cur = nullptr;
  for (const auto& l : split_lines(text)) {
    std::string_view t = l.text;
    if (starts_with(t, "[") && ends_with(t, "]")) {
      cur = &out[std::string(t.substr(1, t.size() - 2))];
      continue;
    }
    if (!cur) continue;
    auto field = [&](std::string_view key, std::set<int>& dst) {
      if (!starts_with(t, key)) return false;
      dst = parse_set(t.substr(key.size()));
      return true;
    };
    if (field("pre_changed:", cur->pre_changed) || field("post_changed:", cur->post_changed) ||
        field("pre_context:", cur->pre_context) || field("post_context:", cur->post_context))
      continue;
    cur->render.emplace_back(t);
  }
  return out;
}

}  // namespace

std::string describe(const LevelOutcome& o) {
  auto set = [](const std::set<int>& s) {
    std::string r;
    for (int x : s) r += " " + std::to_string(x);
    return r;
  };
  std::string s = "pre_changed:" + set(o.pre_changed) + "\npost_changed:" + set(o.post_changed) +
                  "\npre_context:" + set(o.pre_context) + "\npost_context:" + set(o.post_context) + "\n";
  for (const auto& l : o.render) s += l + "\n";
  return s;
}

std::vector<EnrichFixture> load_enrich_fixtures() {
  std::vector<EnrichFixture> out;
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(fixture_root() / "enrich"))
    if (e.is_directory()) dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());
  for (const auto& d : dirs) {
    EnrichFixture f;
    f.name = d.filename().string();
    f.pre = read_text(d / "pre.c");
    f.post = read_text(d / "post.c");
    f.expected = parse_expected(read_text(d / "expected.txt"));
    out.push_back(std::move(f));
  }
  return out;
}

LevelOutcome run_enrich_fixture(const EnrichFixture& f, enrich::Level level) {
  corpus::MemorySnapshotProvider snaps;
  snaps.put("example.org/fixture/repo", "0000000000000000000000000000000000000001", corpus::SnapshotSide::Pre, "a.c", f.pre);
  snaps.put("example.org/fixture/repo", "0000000000000000000000000000000000000001", corpus::SnapshotSide::Post, "a.c", f.post);
  diff::CommitDiff cd;
  auto fd = diff::compute_unified_diff(f.pre, f.post);
  fd.old_path = fd.new_path = "a.c";
  fd.header = diff::make_file_header("a.c", "a.c");
  cd.files.push_back(fd);

  enrich::EnrichOptions opts;
  opts.level = level;
  const auto e = enrich::enrich_diff(diff::render_unified_diff(cd), snaps, "example.org/fixture/repo",
                                     "0000000000000000000000000000000000000001", opts);
  LevelOutcome o;
  for (const auto& t : e.functions) {
    for (auto id : t.pre_changed) o.pre_changed.insert(t.pre_statement_lines[id]);
    for (auto id : t.post_changed) o.post_changed.insert(t.post_statement_lines[id]);
    for (const auto& [id, r] : t.pre_context) o.pre_context.insert(t.pre_statement_lines[id]);
    for (const auto& [id, r] : t.post_context) o.post_context.insert(t.post_statement_lines[id]);
  }
  const std::string rendered = e.render();
  for (const auto& l : split_lines(rendered)) {
    std::string_view t = l.text;
    if (starts_with(t, "diff --git ") || starts_with(t, "--- ") || starts_with(t, "+++ ")) continue;
    o.render.emplace_back(t);
  }
  return o;
}

}  // namespace vfc::testing
