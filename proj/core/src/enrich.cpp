#include "vfc/enrich.hpp"

#include <algorithm>

#include "vfc/text.hpp"

namespace vfc::enrich {

using diff::LineKind;
using syntax::FileAnalysis;
using syntax::FileFallback;

std::string_view to_string(Tag tag) {
  switch (tag) {
    case Tag::ChangedAdded: return "Changed+";
    case Tag::ChangedDeleted: return "Changed-";
    case Tag::CtxControl: return "CtxControl";
    case Tag::CtxDataflow: return "CtxDataflow";
    case Tag::CtxRaw: return "Context";
    case Tag::Header: return "Header";
  }
  return "?";
}

std::string EnrichedHunk::header() const {
  diff::Hunk h;
  h.old_start = old_start;
  h.old_count = old_count;
  h.new_start = new_start;
  h.new_count = new_count;
  h.section = function.empty() ? std::string() : " " + function;
  return h.header();
}

namespace {

struct Row {
  diff::AlignedRow row;
  int old_before = 0;  // old lines consumed before this row
  int new_before = 0;
};

std::vector<Row> aligned_rows(const FileAnalysis& fa) {
  std::vector<Row> rows;
  int o = 0, n = 0;
  for (const auto& r : diff::align_lines(fa.pre, fa.post)) {
    rows.push_back({r, o, n});
    if (r.old_index >= 0) ++o;
    if (r.new_index >= 0) ++n;
  }
  return rows;
}

bool in_range(const std::optional<syntax::LineRange>& r, int line) {
  return r && r->begin <= line && line <= r->end;
}

std::map<int, Reason> line_reasons(const std::map<StatementId, Reason>& ctx, const StatementIR& ir) {
  std::map<int, Reason> out;
  for (const auto& [id, reason] : ctx)
    for (int l : ir[id].lines()) out.emplace(l, reason);
  return out;
}

// Consecutive selected rows become one hunk.
struct Selected {
  std::size_t row;
  EnrichedLine line;
};

std::vector<std::pair<std::size_t, EnrichedHunk>> group_hunks(const std::vector<Row>& rows,
                                                              const std::vector<Selected>& sel,
                                                              const std::string& function) {
  std::vector<std::pair<std::size_t, EnrichedHunk>> out;
  for (std::size_t i = 0; i < sel.size();) {
    std::size_t j = i;
    while (j + 1 < sel.size() && sel[j + 1].row == sel[j].row + 1) ++j;
    EnrichedHunk h;
    h.function = function;
    const Row& first = rows[sel[i].row];
    for (std::size_t k = i; k <= j; ++k) {
      const auto& r = rows[sel[k].row].row;
      if (r.old_index >= 0) ++h.old_count;
      if (r.new_index >= 0) ++h.new_count;
      h.lines.push_back(sel[k].line);
    }
    h.old_start = first.old_before + (h.old_count > 0 ? 1 : 0);
    h.new_start = first.new_before + (h.new_count > 0 ? 1 : 0);
    out.emplace_back(sel[i].row, std::move(h));
    i = j + 1;
  }
  return out;
}

EnrichedLine change_line(const Row& r, const std::vector<TextLine>& pre, const std::vector<TextLine>& post) {
  EnrichedLine l;
  l.provenance = "change";
  if (r.row.kind == LineKind::Deleted) {
    l.tag = Tag::ChangedDeleted;
    l.text = std::string(pre[r.row.old_index].text);
    l.old_lineno = r.row.old_index + 1;
  } else {
    l.tag = Tag::ChangedAdded;
    l.text = std::string(post[r.row.new_index].text);
    l.new_lineno = r.row.new_index + 1;
  }
  return l;
}

EnrichedFile fallback_file(const FileAnalysis& fa) {
  EnrichedFile f;
  f.old_path = fa.raw.old_path;
  f.new_path = fa.raw.new_path;
  f.fallback = fa.fallback;
  f.header = fa.raw.header;
  for (const auto& h : fa.raw.hunks) {
    EnrichedHunk eh;
    eh.old_start = h.old_start;
    eh.old_count = h.old_count;
    eh.new_start = h.new_start;
    eh.new_count = h.new_count;
    eh.function = std::string(trim(h.section));
    for (const auto& l : h.lines) {
      EnrichedLine el;
      el.text = l.text;
      el.old_lineno = l.old_lineno;
      el.new_lineno = l.new_lineno;
      el.provenance = "fallback";
      switch (l.kind) {
        case LineKind::Added: el.tag = Tag::ChangedAdded; break;
        case LineKind::Deleted: el.tag = Tag::ChangedDeleted; break;
        case LineKind::Context: el.tag = Tag::CtxRaw; break;
        default: el.tag = Tag::Header; break;
      }
      eh.lines.push_back(std::move(el));
    }
    f.hunks.push_back(std::move(eh));
  }
  return f;
}

}  // namespace

EnrichedDiff enrich_files(const std::vector<FileAnalysis>& files, const EnrichOptions& options) {
  EnrichedDiff out;
  out.level = options.level;
  out.full_chain = options.full_chain;
  const int d = depth(options.level);
  const syntax::SyntaxTree empty_tree;
  const StatementIR empty_ir;

  for (const auto& fa : files) {
    if (fa.fallback != FileFallback::None) {
      out.files.push_back(fallback_file(fa));
      continue;
    }
    EnrichedFile ef;
    ef.old_path = fa.raw.old_path;
    ef.new_path = fa.raw.new_path;
    if (fa.stripped.hunks.empty()) continue;  // only comments changed

    const auto rows = aligned_rows(fa);
    const auto pre_lines = split_lines(fa.pre);
    const auto post_lines = split_lines(fa.post);
    std::vector<bool> claimed(rows.size(), false);
    std::vector<std::pair<std::size_t, EnrichedHunk>> hunks;

    for (const auto& fp : fa.functions) {
      const auto& pre_tree = fp.pre_tree ? *fp.pre_tree : empty_tree;
      const auto& post_tree = fp.post_tree ? *fp.post_tree : empty_tree;
      const auto& pre_ir = fp.pre_ir ? *fp.pre_ir : empty_ir;
      const auto& post_ir = fp.post_ir ? *fp.post_ir : empty_ir;
      const auto mapping = structdiff::match_trees(pre_tree, post_tree, options.match);
      const auto [seed_pre, seed_post] = structdiff::changed_statements(mapping, pre_ir, post_ir);

      FunctionTrace trace;
      trace.path = fa.raw.path();
      trace.name = fp.name;
      trace.pre_changed = seed_pre.ids;
      trace.post_changed = seed_post.ids;
      trace.pre_context = select_context(seed_pre, pre_ir, d, options.full_chain);
      trace.post_context = select_context(seed_post, post_ir, d, options.full_chain);
      for (const auto& s : pre_ir.statements) {
        trace.pre_statements.push_back(s.text);
        trace.pre_statement_lines.push_back(s.line_begin());
      }
      for (const auto& s : post_ir.statements) {
        trace.post_statements.push_back(s.text);
        trace.post_statement_lines.push_back(s.line_begin());
      }

      const auto pre_reason = line_reasons(trace.pre_context, pre_ir);
      const auto post_reason = line_reasons(trace.post_context, post_ir);

      std::vector<Selected> sel;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i].row;
        const int ol = r.old_index + 1, nl = r.new_index + 1;
        const bool inside = (r.old_index >= 0 && in_range(fp.pre_lines, ol)) ||
                            (r.new_index >= 0 && in_range(fp.post_lines, nl));
        if (!inside || claimed[i]) continue;
        if (r.kind != LineKind::Context) {
          claimed[i] = true;
          sel.push_back({i, change_line(rows[i], pre_lines, post_lines)});
          continue;
        }
        const Reason* why = nullptr;
        if (auto it = pre_reason.find(ol); it != pre_reason.end() && in_range(fp.pre_lines, ol)) why = &it->second;
        else if (auto jt = post_reason.find(nl); jt != post_reason.end() && in_range(fp.post_lines, nl))
          why = &jt->second;
        if (!why) continue;
        claimed[i] = true;
        EnrichedLine l;
        l.text = std::string(post_lines[r.new_index].text);
        l.old_lineno = ol;
        l.new_lineno = nl;
        l.provenance = why->str();
        if (why->kind == Reason::Enclosure) {
          l.tag = Tag::CtxControl;
        } else {
          l.tag = Tag::CtxDataflow;
          l.dataflow_level = why->depth;
        }
        sel.push_back({i, std::move(l)});
      }
      for (auto& h : group_hunks(rows, sel, fp.name)) hunks.push_back(std::move(h));
      out.functions.push_back(std::move(trace));
    }

    std::vector<Selected> residual;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (!claimed[i] && rows[i].row.kind != LineKind::Context)
        residual.push_back({i, change_line(rows[i], pre_lines, post_lines)});
    for (auto& h : group_hunks(rows, residual, "")) hunks.push_back(std::move(h));

    std::stable_sort(hunks.begin(), hunks.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [row, h] : hunks) ef.hunks.push_back(std::move(h));
    out.files.push_back(std::move(ef));
  }
  return out;
}

EnrichedDiff enrich_diff(std::string_view diff_text, const corpus::SnapshotProvider& snapshots,
                         const std::string& repo, const std::string& sha, const EnrichOptions& options) {
  const auto parsed = diff::parse_unified_diff(diff_text);
  return enrich_files(syntax::changed_functions(parsed, snapshots, repo, sha), options);
}

EnrichedDiff enrich_commit(const corpus::CommitRecord& record, const corpus::SnapshotProvider& snapshots,
                           const EnrichOptions& options) {
  return enrich_diff(record.diff, snapshots, record.repo, record.sha, options);
}

bool EnrichedDiff::has_fallback() const {
  return std::any_of(files.begin(), files.end(), [](const auto& f) { return f.fallback != FileFallback::None; });
}

diff::CommitDiff EnrichedDiff::to_commit_diff() const {
  diff::CommitDiff cd;
  cd.message = message;
  for (const auto& f : files) {
    diff::FileDiff fd;
    fd.old_path = f.old_path;
    fd.new_path = f.new_path;
    fd.is_binary = f.fallback == FileFallback::Binary;
    fd.header = f.fallback != FileFallback::None ? f.header : diff::make_file_header(f.old_path, f.new_path);
    for (const auto& h : f.hunks) {
      diff::Hunk dh;
      dh.old_start = h.old_start;
      dh.old_count = h.old_count;
      dh.new_start = h.new_start;
      dh.new_count = h.new_count;
      dh.section = h.function.empty() ? std::string() : " " + h.function;
      for (const auto& l : h.lines) {
        diff::DiffLine dl;
        dl.text = l.text;
        dl.old_lineno = l.old_lineno;
        dl.new_lineno = l.new_lineno;
        switch (l.tag) {
          case Tag::ChangedAdded: dl.kind = LineKind::Added; break;
          case Tag::ChangedDeleted: dl.kind = LineKind::Deleted; break;
          case Tag::Header: dl.kind = LineKind::Header; break;
          default: dl.kind = LineKind::Context; break;
        }
        dh.lines.push_back(std::move(dl));
      }
      fd.hunks.push_back(std::move(dh));
    }
    cd.files.push_back(std::move(fd));
  }
  return cd;
}

std::string EnrichedDiff::render() const { return diff::render_unified_diff(to_commit_diff()); }

nlohmann::json EnrichedDiff::to_json() const {
  using nlohmann::json;
  json j;
  j["level"] = std::string(to_string(level));
  if (message) j["message"] = *message;
  json jf = json::array();
  std::size_t fallbacks = 0;
  for (const auto& f : files) {
    if (f.fallback != FileFallback::None) ++fallbacks;
    json file{{"old_path", f.old_path}, {"new_path", f.new_path}, {"fallback", std::string(to_string(f.fallback))}};
    json hunks = json::array();
    for (const auto& h : f.hunks) {
      json lines = json::array();
      for (const auto& l : h.lines) {
        json jl{{"text", l.text}, {"tag", std::string(to_string(l.tag))}, {"provenance", l.provenance}};
        if (l.tag == Tag::CtxDataflow) jl["level"] = l.dataflow_level;
        if (l.old_lineno) jl["old_lineno"] = *l.old_lineno;
        if (l.new_lineno) jl["new_lineno"] = *l.new_lineno;
        lines.push_back(std::move(jl));
      }
      hunks.push_back({{"header", h.header()}, {"function", h.function}, {"lines", std::move(lines)}});
    }
    file["hunks"] = std::move(hunks);
    jf.push_back(std::move(file));
  }
  j["files"] = std::move(jf);
  json fns = json::array();
  for (const auto& t : functions) {
    auto ctx = [](const std::map<StatementId, Reason>& m) {
      json a = json::array();
      for (const auto& [id, r] : m) a.push_back({{"id", id}, {"reason", r.str()}});
      return a;
    };
    fns.push_back({{"path", t.path},
                   {"name", t.name},
                   {"pre_changed", t.pre_changed},
                   {"post_changed", t.post_changed},
                   {"pre_context", ctx(t.pre_context)},
                   {"post_context", ctx(t.post_context)}});
  }
  j["functions"] = std::move(fns);
  j["metadata"] = {{"enclosure", full_chain ? "chain" : "innermost"},
                   {"move_marks_both_sides", true},
                   {"changed_headers_seed_slicing", true},
                   {"fallback_files", fallbacks}};
  return j;
}

}  // namespace vfc::enrich
