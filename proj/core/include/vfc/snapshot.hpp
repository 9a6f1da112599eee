#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>

namespace vfc::corpus {

enum class SnapshotSide { Pre, Post };

/// Serves file contents of a commit's parent (Pre) or the commit itself
/// (Post). A nullopt result is a definitive miss. Implementations must
/// tolerate concurrent readers.
class SnapshotProvider {
 public:
  virtual ~SnapshotProvider() = default;
  virtual std::optional<std::string> fetch(const std::string& repo, const std::string& sha, SnapshotSide side,
                                           const std::string& path) const = 0;
  virtual std::string describe() const = 0;
};

/// In-memory store, mainly for tests and synthetic corpora.
class MemorySnapshotProvider : public SnapshotProvider {
 public:
  void put(const std::string& repo, const std::string& sha, SnapshotSide side, const std::string& path,
           std::string content);
  std::optional<std::string> fetch(const std::string& repo, const std::string& sha, SnapshotSide side,
                                   const std::string& path) const override;
  std::string describe() const override { return "memory"; }
  std::size_t size() const { return files_.size(); }

 private:
  std::map<std::tuple<std::string, std::string, int, std::string>, std::string> files_;
};

/// Directory layout `<root>/<repo>/<sha>/{pre,post}/<path>`.
class FileCacheSnapshotProvider : public SnapshotProvider {
 public:
  explicit FileCacheSnapshotProvider(std::filesystem::path root);
  std::optional<std::string> fetch(const std::string& repo, const std::string& sha, SnapshotSide side,
                                   const std::string& path) const override;
  std::string describe() const override;
  /// Writes one file into the cache layout (creating directories).
  void store(const std::string& repo, const std::string& sha, SnapshotSide side, const std::string& path,
             const std::string& content) const;

 private:
  std::filesystem::path file_path(const std::string& repo, const std::string& sha, SnapshotSide side,
                                  const std::string& path) const;
  std::filesystem::path root_;
};

/// Reads blobs from local clones at `<root>/<repo>` with `git show`; the
/// pre version is resolved through the first parent (`<sha>^`).
class LocalGitSnapshotProvider : public SnapshotProvider {
 public:
  explicit LocalGitSnapshotProvider(std::filesystem::path root);
  std::optional<std::string> fetch(const std::string& repo, const std::string& sha, SnapshotSide side,
                                   const std::string& path) const override;
  std::string describe() const override;

 private:
  std::filesystem::path root_;
};

/// "git:<dir>" selects the local-git backend; "cache:<dir>" or a bare path
/// selects the file cache. Throws ConfigError when the directory is missing.
std::unique_ptr<SnapshotProvider> open_snapshot_store(const std::string& spec);

}  // namespace vfc::corpus
