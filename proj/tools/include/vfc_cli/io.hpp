#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "vfc/record.hpp"

namespace vfc::cli {

/// Writes to a sibling temporary file and renames on commit(); the temporary
/// is removed if the object dies uncommitted.
class AtomicFile {
 public:
  explicit AtomicFile(std::filesystem::path target);
  ~AtomicFile();
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  std::ostream& stream() { return out_; }
  void commit();

 private:
  std::filesystem::path target_;
  std::filesystem::path tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

struct FileDigest {
  std::string path;
  std::uintmax_t bytes = 0;
  std::string fnv1a64;
  nlohmann::json to_json() const;
};

FileDigest digest_file(const std::filesystem::path& path);

/// Streams a record file in fixed-size batches. Malformed lines raise
/// DataError naming the line.
class RecordReader {
 public:
  explicit RecordReader(const std::filesystem::path& path);
  /// Fills `batch` with up to `max` records; false at end of input.
  bool next(std::vector<corpus::CommitRecord>& batch, std::size_t max);
  std::size_t lines_read() const { return line_; }

 private:
  std::ifstream in_;
  std::size_t line_ = 0;
};

std::vector<corpus::CommitRecord> read_all_records(const std::filesystem::path& path);

/// Applies `fn` to each index with at most `jobs` workers; results keep
/// their index so output order matches input order.
template <class R>
std::vector<R> parallel_map(std::size_t n, unsigned jobs, const std::function<R(std::size_t)>& fn) {
  std::vector<R> out(n);
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < std::min<std::size_t>(jobs, n); ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace vfc::cli
