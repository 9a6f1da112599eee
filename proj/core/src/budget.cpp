#include "vfc/budget.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "vfc/enrich.hpp"
#include "vfc/error.hpp"
#include "vfc/text.hpp"

namespace vfc::budget {

using diff::LineKind;

std::string_view to_string(LineClass c) {
  switch (c) {
    case LineClass::Change: return "change";
    case LineClass::Header: return "header";
    case LineClass::Context: return "context";
    case LineClass::Message: return "message";
  }
  return "?";
}

std::size_t& ClassCounts::at(LineClass c) {
  switch (c) {
    case LineClass::Change: return change;
    case LineClass::Header: return header;
    case LineClass::Context: return context;
    default: return message;
  }
}

Document Document::from_commit_diff(const diff::CommitDiff& diff) {
  Document doc;
  if (diff.message)
    for (const auto& l : split_lines(*diff.message)) doc.lines.push_back({LineClass::Message, std::string(l.text), "", -1});
  for (const auto& l : diff.preamble) doc.lines.push_back({LineClass::Header, l.text, "", -1});
  for (std::size_t f = 0; f < diff.files.size(); ++f) {
    const auto& file = diff.files[f];
    const int fi = static_cast<int>(f);
    for (const auto& l : file.header) doc.lines.push_back({LineClass::Header, l.text, "", fi});
    for (const auto& h : file.hunks) {
      doc.lines.push_back({LineClass::Header, h.header(), "", fi});
      for (const auto& l : h.lines) {
        switch (l.kind) {
          case LineKind::Added: doc.lines.push_back({LineClass::Change, l.text, "+", fi}); break;
          case LineKind::Deleted: doc.lines.push_back({LineClass::Change, l.text, "-", fi}); break;
          case LineKind::Context: doc.lines.push_back({LineClass::Context, l.text, " ", fi}); break;
          case LineKind::Header: doc.lines.push_back({LineClass::Header, l.text, "", fi}); break;
          case LineKind::Message: doc.lines.push_back({LineClass::Message, l.text, "", fi}); break;
        }
      }
    }
  }
  return doc;
}

Document Document::from_enriched(const enrich::EnrichedDiff& diff) { return from_commit_diff(diff.to_commit_diff()); }

std::string Document::render() const {
  std::string out;
  for (const auto& l : lines) {
    out += l.prefix;
    out += l.text;
    out += '\n';
  }
  return out;
}

ClassCounts count_tokens(const std::vector<DocLine>& lines, const Tokenizer& tok) {
  ClassCounts c;
  for (const auto& l : lines) c.at(l.cls) += tok.count(l.text);
  return c;
}

ClassCounts count_tokens(const Document& doc, const Tokenizer& tok) { return count_tokens(doc.lines, tok); }

nlohmann::json TruncationReport::to_json() const {
  auto counts = [](const ClassCounts& c) {
    return nlohmann::json{{"change", c.change}, {"header", c.header}, {"context", c.context}, {"message", c.message}};
  };
  return {{"limit", limit},
          {"before", counts(before)},
          {"removed_tokens", counts(removed)},
          {"discarded_change_fraction", discarded_change_fraction},
          {"change_share_of_removed", change_share_of_removed},
          {"affected", affected}};
}

namespace {

TruncationReport make_report(std::size_t limit, const ClassCounts& before, const ClassCounts& after) {
  TruncationReport r;
  r.limit = limit;
  r.before = before;
  r.removed.change = before.change - after.change;
  r.removed.header = before.header - after.header;
  r.removed.context = before.context - after.context;
  r.removed.message = before.message - after.message;
  r.discarded_change_fraction =
      before.change == 0 ? 0.0 : static_cast<double>(r.removed.change) / static_cast<double>(before.change);
  r.change_share_of_removed =
      r.removed.total() == 0 ? 0.0 : static_cast<double>(r.removed.change) / static_cast<double>(r.removed.total());
  r.affected = r.removed.total() > 0;
  return r;
}

// Keeps the first `keep` tokens of `line`; returns false when none remain.
bool cut_line(DocLine& line, std::size_t keep, const Tokenizer& tok) {
  if (keep == 0) return false;
  const auto spans = tok.spans(line.text);
  if (keep < spans.size()) line.text.resize(spans[keep - 1].end);
  return true;
}

}  // namespace

Truncated truncate_context_aware(const Document& doc, std::size_t limit, const Tokenizer& tok) {
  if (limit == 0) throw ConfigError("token limit must be at least 1");
  const std::size_t n = doc.lines.size();
  std::vector<std::size_t> cost(n);
  for (std::size_t i = 0; i < n; ++i) cost[i] = tok.count(doc.lines[i].text);
  const ClassCounts before = count_tokens(doc, tok);
  std::size_t total = before.total();
  if (total <= limit) return {doc, make_report(limit, before, before)};

  // Distance of each context line to the nearest change line in its file.
  constexpr std::size_t kFar = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(n, kFar);
  {
    std::size_t last = kFar;
    int last_file = -2;
    for (std::size_t i = 0; i < n; ++i) {
      if (doc.lines[i].file != last_file) {
        last = kFar;
        last_file = doc.lines[i].file;
      }
      if (doc.lines[i].cls == LineClass::Change) last = i;
      if (last != kFar) dist[i] = i - last;
    }
    std::size_t next = kFar;
    last_file = -2;
    for (std::size_t i = n; i-- > 0;) {
      if (doc.lines[i].file != last_file) {
        next = kFar;
        last_file = doc.lines[i].file;
      }
      if (doc.lines[i].cls == LineClass::Change) next = i;
      if (next != kFar) dist[i] = std::min(dist[i], next - i);
    }
  }

  std::vector<std::size_t> order;
  auto add_class = [&](LineClass c, bool by_distance) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (doc.lines[i].cls == c) idx.push_back(i);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (by_distance && dist[a] != dist[b]) return dist[a] > dist[b];
      return a > b;
    });
    order.insert(order.end(), idx.begin(), idx.end());
  };
  add_class(LineClass::Context, true);
  add_class(LineClass::Header, false);
  add_class(LineClass::Message, false);

  std::vector<bool> removed(n, false);
  for (std::size_t i : order) {
    if (total <= limit) break;
    removed[i] = true;
    total -= cost[i];
  }
  Document out;
  if (total <= limit) {
    for (std::size_t i = 0; i < n; ++i)
      if (!removed[i]) out.lines.push_back(doc.lines[i]);
  } else {
    // Only change lines remain; keep a prefix of `limit` tokens.
    std::size_t budget = limit;
    for (std::size_t i = 0; i < n && budget > 0; ++i) {
      if (removed[i]) continue;
      DocLine l = doc.lines[i];
      if (cost[i] <= budget) {
        budget -= cost[i];
        out.lines.push_back(std::move(l));
      } else {
        if (cut_line(l, budget, tok)) out.lines.push_back(std::move(l));
        budget = 0;
      }
    }
  }
  return {out, make_report(limit, before, count_tokens(out, tok))};
}

Truncated truncate_naive(const Document& doc, std::size_t limit, const Tokenizer& tok) {
  if (limit == 0) throw ConfigError("token limit must be at least 1");
  const ClassCounts before = count_tokens(doc, tok);
  if (before.total() <= limit) return {doc, make_report(limit, before, before)};
  Document out;
  std::size_t budget = limit;
  for (const auto& line : doc.lines) {
    const std::size_t c = tok.count(line.text);
    if (c <= budget) {
      out.lines.push_back(line);
      budget -= c;
      continue;
    }
    DocLine l = line;
    if (cut_line(l, budget, tok)) out.lines.push_back(std::move(l));
    break;
  }
  return {out, make_report(limit, before, count_tokens(out, tok))};
}

}  // namespace vfc::budget
