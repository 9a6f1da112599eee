#include "vfc_cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "vfc/budget.hpp"
#include "vfc/dedup.hpp"
#include "vfc/diff.hpp"
#include "vfc/enrich.hpp"
#include "vfc/error.hpp"
#include "vfc/filter.hpp"
#include "vfc/metrics.hpp"
#include "vfc/record.hpp"
#include "vfc/snapshot.hpp"
#include "vfc/split.hpp"
#include "vfc/temporal.hpp"
#include "vfc/text.hpp"
#include "vfc/tokenizer.hpp"
#include "vfc_cli/io.hpp"

#ifndef VFC_VERSION
#define VFC_VERSION "0.0.0"
#endif

namespace vfc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t kBatch = 512;

struct Common {
  std::string input;
  std::string output;
  unsigned jobs = 1;
  bool keep_going = false;
};

struct Config {
  Common io;
  // ingest
  std::string group_map;
  bool strict = false;
  // dedup
  std::string dedup_mode = "both";
  // filter
  std::string preset;
  std::vector<std::string> languages, label_sources, sources;
  std::optional<std::int64_t> time_from, time_to;
  std::optional<bool> has_cve;
  // split
  std::string strategy = "random";
  std::vector<double> fractions{0.6, 0.2, 0.2};
  std::uint64_t seed = 0;
  double tolerance = 0.02;
  std::optional<double> target_ratio;
  // enrich
  std::string level = "cf";
  bool full_chain = false;
  std::string snapshot_store;
  // truncate / stats
  std::size_t limit = 512;
  std::string truncation = "context";
  std::string tokenizer = "builtin";
  std::string report;
  bool no_message = false;
  // eval
  std::string predictions;
  std::vector<double> r_values{metrics::kDefaultMaxFpr};
  double threshold = 0.5;
  bool sweep = false;
  // temporal-scan
  std::vector<double> window{0.2, 0.2, 0.2};
  double stride = 0.05;
  std::string f1_file;
};

/// Collects the manifest for one command and writes it beside the output.
class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv) {
    j_["command"] = std::move(command);
    j_["argv"] = std::move(argv);
    j_["version"] = VFC_VERSION;
    j_["inputs"] = json::array();
    j_["counts"] = json::object();
  }
  void input(const std::string& path) { j_["inputs"].push_back(digest_file(path).to_json()); }
  json& config() { return j_["config"]; }
  json& counts() { return j_["counts"]; }
  json& operator[](const char* key) { return j_[key]; }

  /// Stages "<output>.manifest.json"; the caller commits it with the output.
  std::unique_ptr<AtomicFile> stage(const std::string& output) const {
    auto f = std::make_unique<AtomicFile>(output + ".manifest.json");
    f->stream() << j_.dump(2) << '\n';
    return f;
  }

 private:
  json j_;
};

void require_output(const Config& c) {
  if (c.io.output.empty()) throw ConfigError("--output is required");
}

void require_input(const std::string& path, const char* flag) {
  if (path.empty()) throw ConfigError(std::string(flag) + " is required");
  if (!fs::exists(path)) throw ConfigError(std::string(flag) + " does not exist: " + path);
}

void commit(AtomicFile& output, const Manifest& manifest, const std::string& path) {
  auto m = manifest.stage(path);
  output.commit();
  m->commit();
}

corpus::SplitOptions split_options(const Config& c) {
  if (c.fractions.size() != 3) throw ConfigError("--fractions takes exactly three values");
  corpus::SplitOptions o;
  o.fractions = {c.fractions[0], c.fractions[1], c.fractions[2]};
  o.fractions.validate();
  o.seed = c.seed;
  o.tolerance = c.tolerance;
  o.target_ratio = c.target_ratio;
  return o;
}

corpus::FilterCriteria filter_criteria(const Config& c) {
  corpus::FilterCriteria f = c.preset.empty() ? corpus::FilterCriteria{} : corpus::filter_preset(c.preset);
  if (!c.languages.empty()) {
    std::set<std::string> s;
    for (const auto& l : c.languages) s.insert(to_lower(l));
    f.languages = s;
  }
  if (!c.label_sources.empty()) {
    std::set<corpus::LabelSource> s;
    for (const auto& l : c.label_sources) {
      auto v = corpus::label_source_from_string(l);
      if (!v) throw ConfigError("unknown label source '" + l + "'");
      s.insert(*v);
    }
    f.label_sources = s;
  }
  if (!c.sources.empty()) f.sources = std::set<std::string>(c.sources.begin(), c.sources.end());
  if (c.time_from) f.time_from = c.time_from;
  if (c.time_to) f.time_to = c.time_to;
  if (c.has_cve) f.has_cve = c.has_cve;
  if (f.time_from && f.time_to && *f.time_from > *f.time_to) throw ConfigError("--from is after --to");
  return f;
}

// ---- commands --------------------------------------------------------------

int cmd_ingest(const Config& c, Manifest& m, std::ostream& err) {
  require_input(c.io.input, "--input");
  require_output(c);
  std::map<std::string, std::string> groups;
  if (!c.group_map.empty()) {
    require_input(c.group_map, "--group-map");
    groups = corpus::load_group_map(c.group_map);
    m.input(c.group_map);
  }
  m.input(c.io.input);
  auto result = corpus::ingest(c.io.input);
  corpus::apply_group_map(result.records, groups);
  json issues = json::array();
  for (const auto& i : result.issues) {
    issues.push_back({{"line", i.line}, {"message", i.message}});
    err << fmt::format("{}:{}: {}\n", c.io.input, i.line, i.message);
  }
  m["issues"] = issues;
  m.counts() = {{"records", result.records.size()}, {"rejected", result.issues.size()}};
  if (c.strict && !result.issues.empty()) throw DataError(fmt::format("{} invalid record lines", result.issues.size()));
  AtomicFile out(c.io.output);
  corpus::write_records(out.stream(), result.records);
  commit(out, m, c.io.output);
  return kOk;
}

int cmd_dedup(const Config& c, Manifest& m, std::ostream&) {
  require_input(c.io.input, "--input");
  require_output(c);
  if (c.dedup_mode != "exact" && c.dedup_mode != "semantic" && c.dedup_mode != "both")
    throw ConfigError("--mode must be exact, semantic or both");
  m.input(c.io.input);
  auto records = read_all_records(c.io.input);
  json counts = {{"input", records.size()}};
  if (c.dedup_mode != "semantic") {
    corpus::DedupStats st;
    records = corpus::dedup_exact(records, &st);
    counts["exact"] = {{"merged", st.merged}, {"conflict_groups", st.conflict_groups},
                       {"conflict_records", st.conflict_records}, {"output", st.output}};
  }
  if (c.dedup_mode != "exact") {
    corpus::DedupStats st;
    records = corpus::dedup_semantic(records, &st);
    counts["semantic"] = {{"dropped", st.merged}, {"output", st.output}};
  }
  counts["output"] = records.size();
  m.counts() = counts;
  AtomicFile out(c.io.output);
  corpus::write_records(out.stream(), records);
  commit(out, m, c.io.output);
  return kOk;
}

int cmd_filter(const Config& c, Manifest& m, std::ostream&) {
  require_input(c.io.input, "--input");
  require_output(c);
  const auto criteria = filter_criteria(c);
  m.config()["criteria"] = criteria.to_json();
  m.input(c.io.input);
  RecordReader reader(c.io.input);
  AtomicFile out(c.io.output);
  std::vector<corpus::CommitRecord> batch;
  std::size_t in = 0, kept = 0;
  while (reader.next(batch, kBatch)) {
    in += batch.size();
    auto sel = corpus::filter(batch, criteria);
    kept += sel.size();
    corpus::write_records(out.stream(), sel);
  }
  m.counts() = {{"input", in}, {"output", kept}};
  commit(out, m, c.io.output);
  return kOk;
}

int cmd_split(const Config& c, Manifest& m, std::ostream& err) {
  require_input(c.io.input, "--input");
  require_output(c);
  const auto strategy = corpus::split_strategy_from_string(c.strategy);
  const auto opts = split_options(c);
  m.input(c.io.input);
  const auto records = read_all_records(c.io.input);
  const auto a = corpus::split(strategy, records, opts);
  for (const auto& w : a.warnings) err << "warning: " << w << '\n';
  m["assignment"] = a.manifest();
  m.counts() = {{"records", records.size()}};
  AtomicFile out(c.io.output);
  a.write_table(out.stream());
  commit(out, m, c.io.output);
  return kOk;
}

int cmd_enrich(const Config& c, Manifest& m, std::ostream& err) {
  require_input(c.io.input, "--input");
  require_output(c);
  enrich::EnrichOptions opts;
  opts.level = enrich::level_from_string(c.level);
  opts.full_chain = c.full_chain;
  if (c.snapshot_store.empty()) throw ConfigError("--snapshot-store (or VFC_SNAPSHOT_STORE) is required");
  auto store = corpus::open_snapshot_store(c.snapshot_store);
  m.config()["snapshot_store"] = store->describe();
  m.input(c.io.input);

  RecordReader reader(c.io.input);
  AtomicFile out(c.io.output);
  std::vector<corpus::CommitRecord> batch;
  std::size_t n = 0, fallback = 0, failed = 0;
  double seconds = 0;
  while (reader.next(batch, kBatch)) {
    struct Result {
      std::optional<corpus::CommitRecord> record;
      std::string error;
      bool fallback = false;
      double seconds = 0;
    };
    auto results = parallel_map<Result>(batch.size(), c.io.jobs, [&](std::size_t i) {
      Result res;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        auto e = enrich::enrich_commit(batch[i], *store, opts);
        corpus::CommitRecord r = batch[i];
        r.diff = e.render();
        r.passthrough["enrichment"] = e.to_json();
        res.fallback = e.has_fallback();
        res.record = std::move(r);
      } catch (const Error& e) {
        res.error = e.what();
      }
      res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return res;
    });
    for (std::size_t i = 0; i < results.size(); ++i) {
      auto& res = results[i];
      ++n;
      seconds += res.seconds;
      if (!res.record) {
        ++failed;
        if (!c.io.keep_going) throw DataError(batch[i].id() + ": " + res.error);
        err << "warning: " << batch[i].id() << ": " << res.error << '\n';
        auto r = batch[i];
        r.passthrough["enrichment_error"] = res.error;
        res.record = std::move(r);
      }
      fallback += res.fallback;
      out.stream() << corpus::serialize_record(*res.record) << '\n';
    }
  }
  m.counts() = {{"records", n}, {"with_fallback", fallback}, {"failed", failed},
                {"mean_seconds_per_record", n ? seconds / static_cast<double>(n) : 0.0}};
  commit(out, m, c.io.output);
  return kOk;
}

budget::Document record_document(const corpus::CommitRecord& r, bool with_message) {
  auto d = diff::parse_unified_diff(r.diff, with_message && !r.message.empty() ? std::optional(r.message) : std::nullopt);
  return budget::Document::from_commit_diff(d);
}

int cmd_truncate(const Config& c, Manifest& m, std::ostream& err) {
  require_input(c.io.input, "--input");
  require_output(c);
  if (c.limit == 0) throw ConfigError("--limit must be at least 1");
  if (c.truncation != "context" && c.truncation != "naive") throw ConfigError("--strategy must be context or naive");
  const Tokenizer tok = Tokenizer::from_spec(c.tokenizer);
  m.config()["tokenizer_name"] = tok.name();
  m.input(c.io.input);
  const std::string report_path = c.report.empty() ? c.io.output + ".reports.jsonl" : c.report;

  RecordReader reader(c.io.input);
  AtomicFile out(c.io.output);
  AtomicFile reports(report_path);
  std::vector<corpus::CommitRecord> batch;
  std::size_t n = 0, affected = 0, failed = 0;
  double change_discard = 0;
  while (reader.next(batch, kBatch)) {
    struct Result {
      std::optional<corpus::CommitRecord> record;
      json report;
      std::string error;
    };
    auto results = parallel_map<Result>(batch.size(), c.io.jobs, [&](std::size_t i) {
      Result res;
      try {
        const auto doc = record_document(batch[i], !c.no_message);
        const auto t = c.truncation == "naive" ? budget::truncate_naive(doc, c.limit, tok)
                                               : budget::truncate_context_aware(doc, c.limit, tok);
        corpus::CommitRecord r = batch[i];
        std::string message, body;
        for (const auto& l : t.doc.lines) {
          auto& dst = (l.cls == budget::LineClass::Message && l.file < 0) ? message : body;
          dst += l.prefix + l.text + '\n';
        }
        if (!c.no_message) r.message = message.empty() ? message : message.substr(0, message.size() - 1);
        r.diff = body;
        res.report = t.report.to_json();
        res.report["id"] = r.id();
        res.record = std::move(r);
      } catch (const Error& e) {
        res.error = e.what();
      }
      return res;
    });
    for (std::size_t i = 0; i < results.size(); ++i) {
      auto& res = results[i];
      ++n;
      if (!res.record) {
        ++failed;
        if (!c.io.keep_going) throw DataError(batch[i].id() + ": " + res.error);
        err << "warning: " << batch[i].id() << ": " << res.error << '\n';
        continue;
      }
      affected += res.report["affected"].get<bool>();
      change_discard += res.report["discarded_change_fraction"].get<double>();
      out.stream() << corpus::serialize_record(*res.record) << '\n';
      reports.stream() << res.report.dump() << '\n';
    }
  }
  const std::size_t ok = n - failed;
  m["reports"] = report_path;
  m.counts() = {{"records", n}, {"affected", affected}, {"failed", failed},
                {"mean_discarded_change_fraction", ok ? change_discard / static_cast<double>(ok) : 0.0}};
  auto staged = m.stage(c.io.output);
  reports.commit();
  out.commit();
  staged->commit();
  return kOk;
}

json summarize(std::vector<double> v, double grand_total) {
  if (v.empty()) return {{"docs", 0}};
  std::sort(v.begin(), v.end());
  auto quant = [&](double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
  };
  double sum = 0;
  for (double x : v) sum += x;
  // Log2 buckets: [0], [1,2), [2,4), ...
  json hist = json::object();
  for (double x : v) {
    const std::string key = x < 1 ? "0" : fmt::format("{}", static_cast<long long>(std::exp2(std::floor(std::log2(x)))));
    hist[key] = hist.value(key, 0) + 1;
  }
  return {{"docs", v.size()},
          {"total", sum},
          {"share", grand_total > 0 ? sum / grand_total : 0.0},
          {"mean", sum / static_cast<double>(v.size())},
          {"median", quant(0.5)},
          {"p90", quant(0.9)},
          {"max", v.back()},
          {"histogram_log2", hist}};
}

int cmd_stats(const Config& c, Manifest& m, std::ostream& err) {
  require_input(c.io.input, "--input");
  require_output(c);
  const Tokenizer tok = Tokenizer::from_spec(c.tokenizer);
  m.config()["tokenizer_name"] = tok.name();
  m.input(c.io.input);
  RecordReader reader(c.io.input);
  std::vector<corpus::CommitRecord> batch;
  std::vector<double> change, header, context, message, total;
  std::size_t excluded = 0, failed = 0, n = 0;
  while (reader.next(batch, kBatch)) {
    auto counts = parallel_map<std::optional<diff::TokenClassCounts>>(batch.size(), c.io.jobs, [&](std::size_t i) {
      try {
        const auto& r = batch[i];
        auto d = diff::parse_unified_diff(r.diff, c.no_message || r.message.empty() ? std::nullopt : std::optional(r.message));
        return std::optional(diff::classify_token_budget(d, tok));
      } catch (const Error& e) {
        if (!c.io.keep_going) throw DataError(batch[i].id() + ": " + e.what());
        err << "warning: " << batch[i].id() << ": " << e.what() << '\n';
        return std::optional<diff::TokenClassCounts>{};
      }
    });
    for (const auto& k : counts) {
      ++n;
      if (!k) {
        ++failed;
        continue;
      }
      change.push_back(static_cast<double>(k->change));
      header.push_back(static_cast<double>(k->header));
      context.push_back(static_cast<double>(k->context));
      message.push_back(static_cast<double>(k->message));
      total.push_back(static_cast<double>(k->total()));
      excluded += k->excluded_files;
    }
  }
  double grand = 0;
  for (double x : total) grand += x;
  json report = {{"records", n},
                 {"failed", failed},
                 {"excluded_files", excluded},
                 {"classes",
                  {{"change", summarize(change, grand)},
                   {"header", summarize(header, grand)},
                   {"context", summarize(context, grand)},
                   {"message", summarize(message, grand)}}},
                 {"total", summarize(total, grand)}};
  m.counts() = {{"records", n}, {"failed", failed}};
  AtomicFile out(c.io.output);
  out.stream() << report.dump(2) << '\n';
  commit(out, m, c.io.output);
  return kOk;
}

int cmd_eval(const Config& c, Manifest& m, std::ostream& err) {
  require_input(c.predictions, "--predictions");
  require_output(c);
  for (double r : c.r_values)
    if (!(r >= 0 && r <= 1)) throw ConfigError("--r values must lie in [0, 1]");
  m.input(c.predictions);
  const auto preds = metrics::read_predictions(fs::path(c.predictions));
  if (preds.empty()) throw DataError("prediction file is empty");
  json report;
  report["predictions"] = preds.size();
  report["f1"] = metrics::f1_at(preds, c.threshold).to_json();
  json pds = json::array();
  if (metrics::is_discrete(preds)) {
    report["pd_s_error"] = "PD-S is undefined for discrete 0/1 scores; supply continuous scores";
    err << "warning: " << report["pd_s_error"].get<std::string>() << '\n';
  } else {
    for (double r : c.r_values) pds.push_back({{"r", r}, {"pd_s", metrics::pd_s(preds, r)}});
  }
  report["pd_s"] = pds;
  if (c.sweep) {
    json sw = json::array();
    for (const auto& p : metrics::threshold_sweep(preds)) sw.push_back(p.to_json());
    report["sweep"] = sw;
  }
  m.counts() = {{"predictions", preds.size()}};
  AtomicFile out(c.io.output);
  out.stream() << report.dump(2) << '\n';
  commit(out, m, c.io.output);
  return kOk;
}

int cmd_temporal(const Config& c, Manifest& m, std::ostream&) {
  require_input(c.io.input, "--input");
  require_output(c);
  if (c.window.size() != 3) throw ConfigError("--window takes exactly three values");
  corpus::WindowOptions opts;
  opts.window_fracs = {c.window[0], c.window[1], c.window[2]};
  opts.stride = c.stride;
  corpus::window_count(opts.window_fracs, opts.stride);  // validates
  if (!c.f1_file.empty()) {
    require_input(c.f1_file, "--f1");
    std::ifstream in(c.f1_file);
    try {
      opts.external_f1 = json::parse(in).get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("--f1 must hold a JSON array of numbers: ") + e.what());
    }
    m.input(c.f1_file);
  }
  m.input(c.io.input);
  const auto records = read_all_records(c.io.input);
  const auto windows = corpus::sliding_window_scan(records, opts);
  json arr = json::array();
  for (const auto& w : windows) arr.push_back(w.to_json());
  m.counts() = {{"records", records.size()}, {"windows", windows.size()}};
  AtomicFile out(c.io.output);
  out.stream() << json({{"records", records.size()}, {"windows", arr}}).dump(2) << '\n';
  commit(out, m, c.io.output);
  return kOk;
}

json config_json(const Config& c, const std::string& cmd) {
  json j = {{"input", c.io.input}, {"output", c.io.output}, {"jobs", c.io.jobs}, {"keep_going", c.io.keep_going}};
  if (cmd == "ingest") j.update({{"group_map", c.group_map}, {"strict", c.strict}});
  if (cmd == "dedup") j["mode"] = c.dedup_mode;
  if (cmd == "split")
    j.update({{"strategy", c.strategy}, {"fractions", c.fractions}, {"seed", c.seed}, {"tolerance", c.tolerance},
              {"target_ratio", c.target_ratio ? json(*c.target_ratio) : json(nullptr)}});
  if (cmd == "enrich") j.update({{"level", c.level}, {"full_chain", c.full_chain}});
  if (cmd == "truncate")
    j.update({{"limit", c.limit}, {"strategy", c.truncation}, {"tokenizer", c.tokenizer}, {"no_message", c.no_message}});
  if (cmd == "stats") j.update({{"tokenizer", c.tokenizer}, {"no_message", c.no_message}});
  if (cmd == "eval")
    j.update({{"predictions", c.predictions}, {"r", c.r_values}, {"threshold", c.threshold}, {"sweep", c.sweep}});
  if (cmd == "temporal-scan") j.update({{"window", c.window}, {"stride", c.stride}, {"f1", c.f1_file}});
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"vfc: build, enrich, split and evaluate vulnerability-fixing commit corpora"};
  app.set_version_flag("--version", VFC_VERSION);
  app.require_subcommand(1);

  auto io = [&](CLI::App* s, bool input = true) {
    if (input) s->add_option("-i,--input", c.io.input, "Input record file (JSON lines)");
    s->add_option("-o,--output", c.io.output, "Output file; a manifest is written beside it");
  };
  auto parallel = [&](CLI::App* s) {
    s->add_option("-j,--jobs", c.io.jobs, "Worker threads (output order is preserved)")->check(CLI::Range(1u, 1024u));
    s->add_flag("--keep-going", c.io.keep_going, "Report per-record failures instead of aborting");
  };

  auto* ingest = app.add_subcommand("ingest", "Normalize raw records");
  io(ingest);
  ingest->add_option("--group-map", c.group_map, "File of 'repo group' pairs for fork/mirror grouping");
  ingest->add_flag("--strict", c.strict, "Fail when any line is rejected");

  auto* dedup = app.add_subcommand("dedup", "Remove duplicate commits");
  io(dedup);
  dedup->add_option("--mode", c.dedup_mode, "exact, semantic or both")->capture_default_str();

  auto* filt = app.add_subcommand("filter", "Select records by metadata");
  io(filt);
  filt->add_option("--preset", c.preset, "ds1, ds2, ds3 or ds4");
  filt->add_option("--language", c.languages, "Keep records touching any of these languages");
  filt->add_option("--label-source", c.label_sources, "manual, advisory, tool or synthetic");
  filt->add_option("--source", c.sources, "Keep records from any of these datasets");
  filt->add_option("--from", c.time_from, "Earliest timestamp (inclusive, epoch seconds)");
  filt->add_option("--to", c.time_to, "Latest timestamp (inclusive, epoch seconds)");
  filt->add_option("--has-cve", c.has_cve, "true or false");

  auto* spl = app.add_subcommand("split", "Assign records to train/val/test");
  io(spl);
  spl->add_option("--strategy", c.strategy, "random, temporal, group or cve")->capture_default_str();
  spl->add_option("--fractions", c.fractions, "train val test fractions")->delimiter(',')->expected(3);
  spl->add_option("--seed", c.seed, "Seed for every random choice")->capture_default_str();
  spl->add_option("--tolerance", c.tolerance, "Deviation that triggers a warning")->capture_default_str();
  spl->add_option("--target-ratio", c.target_ratio, "cve strategy: VFC share in val and test");

  auto* enr = app.add_subcommand("enrich", "Add function context to diffs");
  io(enr);
  parallel(enr);
  enr->add_option("--level", c.level, "cf, df1 or df2")->capture_default_str();
  enr->add_flag("--full-chain", c.full_chain, "Include every enclosing control statement");
  enr->add_option("--snapshot-store", c.snapshot_store, "git:<dir>, cache:<dir> or <dir>")->envname("VFC_SNAPSHOT_STORE");

  auto* trn = app.add_subcommand("truncate", "Fit records into a token budget");
  io(trn);
  parallel(trn);
  trn->add_option("--limit", c.limit, "Token limit")->capture_default_str();
  trn->add_option("--strategy", c.truncation, "context or naive")->capture_default_str();
  trn->add_option("--tokenizer", c.tokenizer, "builtin or vocab:<path>")->capture_default_str();
  trn->add_option("--report", c.report, "Per-record report file (default <output>.reports.jsonl)");
  trn->add_flag("--no-message", c.no_message, "Leave commit messages out of the budget and output");

  auto* sts = app.add_subcommand("stats", "Token counts per line class");
  io(sts);
  parallel(sts);
  sts->add_option("--tokenizer", c.tokenizer, "builtin or vocab:<path>")->capture_default_str();
  sts->add_flag("--no-message", c.no_message, "Ignore commit messages");

  auto* ev = app.add_subcommand("eval", "Score classifier predictions");
  io(ev, false);
  ev->add_option("-p,--predictions", c.predictions, "Prediction file: JSON lines {id, score, label}");
  ev->add_option("--r", c.r_values, "FPR bounds for PD-S (repeatable)")->capture_default_str();
  ev->add_option("--threshold", c.threshold, "Decision threshold for F1")->capture_default_str();
  ev->add_flag("--sweep", c.sweep, "Include the full threshold sweep");

  auto* tmp = app.add_subcommand("temporal-scan", "Sliding-window drift diagnostics");
  io(tmp);
  tmp->add_option("--window", c.window, "train val test window fractions")->delimiter(',')->expected(3);
  tmp->add_option("--stride", c.stride, "Offset step")->capture_default_str();
  tmp->add_option("--f1", c.f1_file, "JSON array of externally computed F1 per window");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();
  Manifest manifest(cmd, args);
  manifest.config() = config_json(c, cmd);
  try {
    if (cmd == "ingest") return cmd_ingest(c, manifest, err);
    if (cmd == "dedup") return cmd_dedup(c, manifest, err);
    if (cmd == "filter") return cmd_filter(c, manifest, err);
    if (cmd == "split") return cmd_split(c, manifest, err);
    if (cmd == "enrich") return cmd_enrich(c, manifest, err);
    if (cmd == "truncate") return cmd_truncate(c, manifest, err);
    if (cmd == "stats") return cmd_stats(c, manifest, err);
    if (cmd == "eval") return cmd_eval(c, manifest, err);
    if (cmd == "temporal-scan") return cmd_temporal(c, manifest, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kConfigError;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace vfc::cli
