#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "vfc/budget.hpp"
#include "vfc/diff.hpp"
#include "vfc/metrics.hpp"
#include "vfc/record.hpp"
#include "vfc/snapshot.hpp"

namespace vfc::testing {

/// A statement whose reads and writes are known by construction.
struct GenStatement {
  std::string text;
  std::set<std::string> reads, writes;
};

/// Straight-line or lightly nested C function with a ground-truth def-use table.
struct GenFunction {
  std::string source;
  std::vector<GenStatement> statements;  // in source (pre-order) order
};

GenFunction generate_small_function(std::mt19937_64& rng, int max_statements);

/// Def-use closure by path enumeration: statements reachable from a seed over
/// at most `d` def-use edges (backward: earlier writer of a read variable;
/// forward: later reader of a written variable). Seeds are excluded.
std::set<std::size_t> brute_force_slice(const GenFunction& f, const std::set<std::size_t>& seeds, int d,
                                        bool backward);

struct SynthCorpus {
  std::vector<corpus::CommitRecord> records;
  corpus::MemorySnapshotProvider snapshots;
};

/// Commits editing synthetic C files: constant and operator tweaks, inserted,
/// deleted and guarded statements; about one in five touches two files.
SynthCorpus generate_commit_corpus(std::size_t n, std::uint64_t seed);

/// Documents whose change lines sit behind a long message and leading
/// context, each well above 4096 builtin tokens.
std::vector<budget::Document> generate_adversarial_documents(std::size_t n, std::uint64_t seed);

struct RecordCorpusOptions {
  std::size_t records = 1000;
  std::size_t groups = 100;
  double max_group_share = 0.1;
  double vfc_rate = 0.3;
  double cve_rate = 0.2;  // among VFCs
};

/// Metadata-only records with skewed group sizes and per-group VFC rates.
std::vector<corpus::CommitRecord> generate_records(const RecordCorpusOptions& opts, std::uint64_t seed);

std::string random_sha(std::mt19937_64& rng);

/// FNR at the max-TPR threshold with FPR <= r, found by counting the
/// confusion matrix directly at +inf and every observed score.
double brute_force_pd_s(const std::vector<metrics::ScoredPrediction>& preds, double r);

/// Up to `max_n` predictions with both labels and scores on a coarse grid,
/// so ties are common.
std::vector<metrics::ScoredPrediction> random_predictions(std::mt19937_64& rng, int max_n);

}  // namespace vfc::testing
