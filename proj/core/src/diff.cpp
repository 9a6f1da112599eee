#include "vfc/diff.hpp"

#include <charconv>
#include <unordered_map>

#include <fmt/format.h>

#include "myers.hpp"
#include "vfc/error.hpp"
#include "vfc/text.hpp"
#include "vfc/tokenizer.hpp"

namespace vfc::diff {

std::string_view to_string(LineKind kind) {
  switch (kind) {
    case LineKind::Added: return "added";
    case LineKind::Deleted: return "deleted";
    case LineKind::Context: return "context";
    case LineKind::Header: return "header";
    case LineKind::Message: return "message";
  }
  return "unknown";
}

namespace {

constexpr std::string_view kNoNewline = "\\ No newline at end of file";

std::string format_range(int start, int count) {
  if (count == 1) return std::to_string(start);
  return fmt::format("{},{}", start, count);
}

bool parse_int(std::string_view s, std::size_t& pos, int& out) {
  const char* begin = s.data() + pos;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr == begin) return false;
  pos += static_cast<std::size_t>(ptr - begin);
  return true;
}

// "-a[,b]" or "+c[,d]"; a missing count means 1.
bool parse_range(std::string_view s, std::size_t& pos, char sign, int& start, int& count) {
  if (pos >= s.size() || s[pos] != sign) return false;
  ++pos;
  if (!parse_int(s, pos, start)) return false;
  count = 1;
  if (pos < s.size() && s[pos] == ',') {
    ++pos;
    if (!parse_int(s, pos, count)) return false;
  }
  return start >= 0 && count >= 0;
}

bool parse_hunk_header(std::string_view line, Hunk& hunk) {
  if (!starts_with(line, "@@ ")) return false;
  std::size_t pos = 3;
  if (!parse_range(line, pos, '-', hunk.old_start, hunk.old_count)) return false;
  if (pos >= line.size() || line[pos] != ' ') return false;
  ++pos;
  if (!parse_range(line, pos, '+', hunk.new_start, hunk.new_count)) return false;
  if (line.substr(pos, 3) != " @@") return false;
  hunk.section = std::string(line.substr(pos + 3));
  return true;
}

std::string strip_path(std::string_view raw) {
  std::string_view p = raw;
  // Plain diffs may carry a tab-separated timestamp.
  if (auto tab = p.find('\t'); tab != std::string_view::npos) p = p.substr(0, tab);
  if (p.size() >= 2 && p.front() == '"' && p.back() == '"') p = p.substr(1, p.size() - 2);
  if (p == "/dev/null") return std::string(p);
  if (starts_with(p, "a/") || starts_with(p, "b/")) p.remove_prefix(2);
  return std::string(p);
}

void paths_from_git_line(std::string_view line, FileDiff& file) {
  std::string_view rest = line.substr(std::string_view("diff --git ").size());
  // "a/X b/Y": prefer the split where both halves are equal (no rename).
  if (starts_with(rest, "a/")) {
    const std::size_t half = rest.size() / 2;
    if (rest.size() % 2 == 1 && rest[half] == ' ' && rest.substr(half + 1, 2) == "b/" &&
        rest.substr(2, half - 2) == rest.substr(half + 3)) {
      file.old_path = std::string(rest.substr(2, half - 2));
      file.new_path = file.old_path;
      return;
    }
    if (auto sep = rest.find(" b/"); sep != std::string_view::npos) {
      file.old_path = std::string(rest.substr(2, sep - 2));
      file.new_path = std::string(rest.substr(sep + 3));
    }
  }
}

DiffLine header_line(std::string_view text) {
  return DiffLine{LineKind::Header, std::string(text), std::nullopt, std::nullopt};
}

bool header_has_minus(const FileDiff& file) {
  for (const auto& l : file.header)
    if (starts_with(l.text, "--- ")) return true;
  return false;
}

}  // namespace

std::string Hunk::header() const {
  return fmt::format("@@ -{} +{} @@{}", format_range(old_start, old_count),
                     format_range(new_start, new_count), section);
}

const std::string& FileDiff::path() const { return is_deleted() ? old_path : new_path; }

CommitDiff parse_unified_diff(std::string_view text, std::optional<std::string> message) {
  CommitDiff out;
  out.message = std::move(message);
  DecodedText decoded = sanitize_utf8(text);
  out.lossy_decoding = decoded.lossy;
  const std::string& src = decoded.text;
  out.missing_final_newline = !src.empty() && src.back() != '\n';

  const std::vector<TextLine> lines = split_lines(src);
  const std::size_t n = lines.size();
  FileDiff* file = nullptr;
  std::size_t i = 0;

  auto new_file = [&]() -> FileDiff& {
    out.files.emplace_back();
    file = &out.files.back();
    return *file;
  };

  while (i < n) {
    const std::string_view line = lines[i].text;
    const std::size_t lineno = i + 1;

    if (starts_with(line, "diff --git ") || starts_with(line, "diff -")) {
      FileDiff& f = new_file();
      f.header.push_back(header_line(line));
      if (starts_with(line, "diff --git ")) paths_from_git_line(line, f);
      ++i;
      continue;
    }

    if (starts_with(line, "--- ") && i + 1 < n && starts_with(lines[i + 1].text, "+++ ") &&
        (file == nullptr || !file->hunks.empty() || header_has_minus(*file))) {
      new_file();
    }

    if (starts_with(line, "@@ ")) {
      if (file == nullptr) new_file();
      Hunk hunk;
      if (!parse_hunk_header(line, hunk)) throw ParseError("malformed hunk header", lineno);
      ++i;
      int old_left = hunk.old_count;
      int new_left = hunk.new_count;
      int old_no = hunk.old_start;
      int new_no = hunk.new_start;
      while (old_left > 0 || new_left > 0) {
        if (i >= n)
          throw ParseError(fmt::format("hunk body ends early: {} old and {} new lines missing",
                                       old_left, new_left),
                           lineno);
        const std::string_view body = lines[i].text;
        const char c = body.empty() ? ' ' : body.front();
        const std::string content(body.empty() ? std::string_view{} : body.substr(1));
        if (c == ' ') {
          if (old_left == 0 || new_left == 0)
            throw ParseError("context line exceeds hunk header counts", i + 1);
          hunk.lines.push_back({LineKind::Context, content, old_no++, new_no++});
          --old_left;
          --new_left;
        } else if (c == '-') {
          if (old_left == 0) throw ParseError("deleted line exceeds hunk header counts", i + 1);
          hunk.lines.push_back({LineKind::Deleted, content, old_no++, std::nullopt});
          --old_left;
        } else if (c == '+') {
          if (new_left == 0) throw ParseError("added line exceeds hunk header counts", i + 1);
          hunk.lines.push_back({LineKind::Added, content, std::nullopt, new_no++});
          --new_left;
        } else if (c == '\\') {
          hunk.lines.push_back(header_line(body));
        } else {
          throw ParseError(fmt::format("hunk body shorter than header counts ({} old, {} new left)",
                                       old_left, new_left),
                           i + 1);
        }
        ++i;
      }
      while (i < n && starts_with(lines[i].text, "\\")) hunk.lines.push_back(header_line(lines[i++].text));
      file->hunks.push_back(std::move(hunk));
      continue;
    }

    if (file == nullptr) {
      out.preamble.push_back(header_line(line));
      ++i;
      continue;
    }

    if (file->hunks.empty()) {
      if (starts_with(line, "--- ")) {
        file->old_path = strip_path(line.substr(4));
      } else if (starts_with(line, "+++ ")) {
        file->new_path = strip_path(line.substr(4));
      } else if (starts_with(line, "rename from ") || starts_with(line, "copy from ")) {
        file->old_path = std::string(line.substr(line.find("from ") + 5));
      } else if (starts_with(line, "rename to ") || starts_with(line, "copy to ")) {
        file->new_path = std::string(line.substr(line.find("to ") + 3));
      } else if (starts_with(line, "new file mode")) {
        file->old_path = "/dev/null";
      } else if (starts_with(line, "deleted file mode")) {
        file->new_path = "/dev/null";
      } else if (starts_with(line, "Binary files ") || line == "GIT binary patch") {
        file->is_binary = true;
      }
      file->header.push_back(header_line(line));
    } else {
      const bool diff_content = !line.empty() && (line.front() == '+' || line.front() == '-' ||
                                                  line.front() == ' ');
      if (diff_content && line != "-- ")
        throw ParseError("line outside any hunk looks like hunk content (counts too small?)", lineno);
      file->hunks.back().lines.push_back(header_line(line));
    }
    ++i;
  }
  return out;
}

void validate_hunk(const Hunk& hunk, std::string_view where) {
  int old_lines = 0;
  int new_lines = 0;
  for (const auto& l : hunk.lines) {
    if (l.kind == LineKind::Context) {
      ++old_lines;
      ++new_lines;
    } else if (l.kind == LineKind::Deleted) {
      ++old_lines;
    } else if (l.kind == LineKind::Added) {
      ++new_lines;
    }
  }
  if (old_lines != hunk.old_count || new_lines != hunk.new_count)
    throw RenderError(fmt::format("{}: header declares -{} +{} but body has -{} +{}", where,
                                  hunk.old_count, hunk.new_count, old_lines, new_lines));
}

namespace {

void render_line(std::string& out, const DiffLine& l) {
  switch (l.kind) {
    case LineKind::Added: out += '+'; break;
    case LineKind::Deleted: out += '-'; break;
    case LineKind::Context: out += ' '; break;
    default: break;
  }
  out += l.text;
  out += '\n';
}

void render_file_into(std::string& out, const FileDiff& file) {
  for (const auto& h : file.header) render_line(out, h);
  for (std::size_t k = 0; k < file.hunks.size(); ++k) {
    const Hunk& hunk = file.hunks[k];
    validate_hunk(hunk, fmt::format("hunk {} of '{}'", k + 1, file.path()));
    out += hunk.header();
    out += '\n';
    for (const auto& l : hunk.lines) render_line(out, l);
  }
}

}  // namespace

std::string render_file_diff(const FileDiff& file) {
  std::string out;
  render_file_into(out, file);
  return out;
}

std::string render_unified_diff(const CommitDiff& diff) {
  std::string out;
  for (const auto& l : diff.preamble) render_line(out, l);
  for (const auto& f : diff.files) render_file_into(out, f);
  if (diff.missing_final_newline && !out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

std::vector<DiffLine> flatten(const CommitDiff& diff) {
  std::vector<DiffLine> out;
  if (diff.message) {
    for (const auto& l : split_lines(*diff.message))
      out.push_back({LineKind::Message, std::string(l.text), std::nullopt, std::nullopt});
  }
  out.insert(out.end(), diff.preamble.begin(), diff.preamble.end());
  for (const auto& f : diff.files) {
    out.insert(out.end(), f.header.begin(), f.header.end());
    for (const auto& h : f.hunks) {
      out.push_back(header_line(h.header()));
      out.insert(out.end(), h.lines.begin(), h.lines.end());
    }
  }
  return out;
}

std::vector<DiffLine> make_file_header(const std::string& old_path, const std::string& new_path) {
  const std::string a = old_path == "/dev/null" ? new_path : old_path;
  const std::string b = new_path == "/dev/null" ? old_path : new_path;
  std::vector<DiffLine> h;
  h.push_back(header_line(fmt::format("diff --git a/{} b/{}", a, b)));
  h.push_back(header_line(old_path == "/dev/null" ? std::string("--- /dev/null") : "--- a/" + old_path));
  h.push_back(header_line(new_path == "/dev/null" ? std::string("+++ /dev/null") : "+++ b/" + new_path));
  return h;
}

namespace {

// Lines are interned by (content, has-newline) so that a final line without
// a newline differs from the same text with one.
struct Interned {
  std::vector<TextLine> a_lines, b_lines;
  std::vector<int> a, b;
};

Interned intern(std::string_view pre, std::string_view post) {
  Interned in;
  in.a_lines = split_lines(pre);
  in.b_lines = split_lines(post);
  std::unordered_map<std::string, int> ids;
  auto id_of = [&](const TextLine& l) {
    std::string key(l.text);
    key.push_back(l.newline ? '\n' : '\0');
    auto [it, inserted] = ids.try_emplace(std::move(key), static_cast<int>(ids.size()));
    return it->second;
  };
  in.a.reserve(in.a_lines.size());
  in.b.reserve(in.b_lines.size());
  for (const auto& l : in.a_lines) in.a.push_back(id_of(l));
  for (const auto& l : in.b_lines) in.b.push_back(id_of(l));
  return in;
}

}  // namespace

std::vector<AlignedRow> align_lines(std::string_view pre, std::string_view post) {
  const Interned in = intern(pre, post);
  std::vector<AlignedRow> rows;
  for (const auto& e : detail::shortest_edit_script(in.a, in.b)) {
    switch (e.kind) {
      case detail::EditKind::Equal: rows.push_back({LineKind::Context, e.a, e.b}); break;
      case detail::EditKind::Delete: rows.push_back({LineKind::Deleted, e.a, -1}); break;
      case detail::EditKind::Insert: rows.push_back({LineKind::Added, -1, e.b}); break;
    }
  }
  return rows;
}

FileDiff compute_unified_diff(std::string_view pre, std::string_view post, int context_n) {
  if (context_n < 0) throw ConfigError("context width must be >= 0");
  const Interned in = intern(pre, post);
  const auto edits = detail::shortest_edit_script(in.a, in.b);
  FileDiff file;
  const int total = static_cast<int>(edits.size());

  // Positions (in edit space) of the old/new line cursor before each edit.
  std::vector<int> old_before(total + 1), new_before(total + 1);
  for (int k = 0, o = 0, nw = 0; k <= total; ++k) {
    old_before[k] = o;
    new_before[k] = nw;
    if (k == total) break;
    if (edits[k].kind != detail::EditKind::Insert) ++o;
    if (edits[k].kind != detail::EditKind::Delete) ++nw;
  }

  int k = 0;
  while (k < total) {
    if (edits[k].kind == detail::EditKind::Equal) {
      ++k;
      continue;
    }
    // Extend the hunk while the next change is within 2*context equal edits.
    const int first_change = k;
    int last_change = k;
    int scan = k + 1;
    while (scan < total) {
      if (edits[scan].kind != detail::EditKind::Equal) {
        last_change = scan;
        ++scan;
        continue;
      }
      int run = scan;
      while (run < total && edits[run].kind == detail::EditKind::Equal) ++run;
      if (run < total && run - scan <= 2 * context_n) {
        scan = run;
        continue;
      }
      break;
    }
    const int begin = std::max(0, first_change - context_n);
    const int end = std::min(total, last_change + 1 + context_n);

    Hunk hunk;
    for (int e = begin; e < end; ++e) {
      const auto& ed = edits[e];
      if (ed.kind == detail::EditKind::Equal) {
        const TextLine& l = in.a_lines[ed.a];
        hunk.lines.push_back({LineKind::Context, std::string(l.text), ed.a + 1, ed.b + 1});
        ++hunk.old_count;
        ++hunk.new_count;
        if (!l.newline) hunk.lines.push_back(header_line(kNoNewline));
      } else if (ed.kind == detail::EditKind::Delete) {
        const TextLine& l = in.a_lines[ed.a];
        hunk.lines.push_back({LineKind::Deleted, std::string(l.text), ed.a + 1, std::nullopt});
        ++hunk.old_count;
        if (!l.newline) hunk.lines.push_back(header_line(kNoNewline));
      } else {
        const TextLine& l = in.b_lines[ed.b];
        hunk.lines.push_back({LineKind::Added, std::string(l.text), std::nullopt, ed.b + 1});
        ++hunk.new_count;
        if (!l.newline) hunk.lines.push_back(header_line(kNoNewline));
      }
    }
    hunk.old_start = old_before[begin] + (hunk.old_count > 0 ? 1 : 0);
    hunk.new_start = new_before[begin] + (hunk.new_count > 0 ? 1 : 0);
    file.hunks.push_back(std::move(hunk));
    k = end;
  }
  return file;
}

std::string apply_file_diff(std::string_view pre, const FileDiff& file) {
  const std::vector<TextLine> src = split_lines(pre);
  struct OutLine {
    std::string_view text;
    bool newline;
  };
  std::vector<OutLine> out;
  std::size_t cursor = 0;  // next unconsumed pre line (0-based)

  for (std::size_t h = 0; h < file.hunks.size(); ++h) {
    const Hunk& hunk = file.hunks[h];
    const std::size_t first_old =
        hunk.old_count > 0 ? static_cast<std::size_t>(hunk.old_start - 1) : static_cast<std::size_t>(hunk.old_start);
    if (first_old < cursor || first_old > src.size())
      throw DataError(fmt::format("hunk {} starts at old line {} outside the file", h + 1, hunk.old_start));
    while (cursor < first_old) {
      out.push_back({src[cursor].text, src[cursor].newline});
      ++cursor;
    }
    for (std::size_t k = 0; k < hunk.lines.size(); ++k) {
      const DiffLine& l = hunk.lines[k];
      if (l.kind == LineKind::Header) continue;
      const bool newline =
          !(k + 1 < hunk.lines.size() && hunk.lines[k + 1].kind == LineKind::Header &&
            starts_with(hunk.lines[k + 1].text, "\\"));
      if (l.kind == LineKind::Context || l.kind == LineKind::Deleted) {
        if (cursor >= src.size() || src[cursor].text != l.text || src[cursor].newline != newline)
          throw DataError(fmt::format("hunk {} does not match pre-image at line {}", h + 1, cursor + 1));
        ++cursor;
      }
      if (l.kind == LineKind::Context || l.kind == LineKind::Added) out.push_back({l.text, newline});
    }
  }
  while (cursor < src.size()) {
    out.push_back({src[cursor].text, src[cursor].newline});
    ++cursor;
  }
  std::string result;
  for (const auto& l : out) {
    result += l.text;
    if (l.newline) result += '\n';
  }
  return result;
}

TokenClassCounts classify_token_budget(const CommitDiff& diff, const Tokenizer& tokenizer) {
  TokenClassCounts counts;
  if (diff.message) {
    for (const auto& l : split_lines(*diff.message)) counts.message += tokenizer.count(l.text);
  }
  for (const auto& l : diff.preamble) counts.header += tokenizer.count(l.text);
  for (const auto& f : diff.files) {
    if (f.is_binary || f.hunks.empty()) {
      ++counts.excluded_files;
      continue;
    }
    for (const auto& l : f.header) counts.header += tokenizer.count(l.text);
    for (const auto& h : f.hunks) {
      counts.header += tokenizer.count(h.header());
      for (const auto& l : h.lines) {
        const std::size_t t = tokenizer.count(l.text);
        switch (l.kind) {
          case LineKind::Added:
          case LineKind::Deleted: counts.change += t; break;
          case LineKind::Context: counts.context += t; break;
          case LineKind::Header: counts.header += t; break;
          case LineKind::Message: counts.message += t; break;
        }
      }
    }
  }
  return counts;
}

}  // namespace vfc::diff
