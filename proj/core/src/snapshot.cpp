#include "vfc/snapshot.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fstream>
#include <sstream>

#include "vfc/error.hpp"
#include "vfc/text.hpp"

extern char** environ;

namespace vfc::corpus {

namespace fs = std::filesystem;

namespace {

const char* side_dir(SnapshotSide side) { return side == SnapshotSide::Pre ? "pre" : "post"; }

// Rejects absolute paths and ".." components so keys cannot escape the root.
bool safe_relative(const std::string& path) {
  if (path.empty() || path.front() == '/') return false;
  for (const auto& part : split(path, '/'))
    if (part == "..") return false;
  return true;
}

std::optional<std::string> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs argv without a shell; returns stdout on exit status 0.
std::optional<std::string> run_capture(const std::vector<std::string>& argv) {
  int out_pipe[2];
  if (pipe(out_pipe) != 0) return std::nullopt;
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, out_pipe[0]);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null", O_WRONLY, 0);
  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);
  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  close(out_pipe[1]);
  if (rc != 0) {
    close(out_pipe[0]);
    return std::nullopt;
  }
  std::string out;
  char buf[65536];
  ssize_t n;
  while ((n = read(out_pipe[0], buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(n));
  close(out_pipe[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return std::nullopt;
  return out;
}

}  // namespace

void MemorySnapshotProvider::put(const std::string& repo, const std::string& sha, SnapshotSide side,
                                 const std::string& path, std::string content) {
  files_[{repo, sha, static_cast<int>(side), path}] = std::move(content);
}

std::optional<std::string> MemorySnapshotProvider::fetch(const std::string& repo, const std::string& sha,
                                                         SnapshotSide side, const std::string& path) const {
  auto it = files_.find({repo, sha, static_cast<int>(side), path});
  if (it == files_.end()) return std::nullopt;
  return it->second;
}

FileCacheSnapshotProvider::FileCacheSnapshotProvider(fs::path root) : root_(std::move(root)) {}

fs::path FileCacheSnapshotProvider::file_path(const std::string& repo, const std::string& sha, SnapshotSide side,
                                              const std::string& path) const {
  return root_ / repo / sha / side_dir(side) / path;
}

std::optional<std::string> FileCacheSnapshotProvider::fetch(const std::string& repo, const std::string& sha,
                                                            SnapshotSide side, const std::string& path) const {
  if (!safe_relative(repo) || !safe_relative(sha) || !safe_relative(path)) return std::nullopt;
  return read_file(file_path(repo, sha, side, path));
}

void FileCacheSnapshotProvider::store(const std::string& repo, const std::string& sha, SnapshotSide side,
                                      const std::string& path, const std::string& content) const {
  if (!safe_relative(repo) || !safe_relative(sha) || !safe_relative(path))
    throw DataError("unsafe snapshot key '" + repo + "/" + sha + "/" + path + "'");
  const fs::path p = file_path(repo, sha, side, path);
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  out << content;
}

std::string FileCacheSnapshotProvider::describe() const { return "cache:" + root_.string(); }

LocalGitSnapshotProvider::LocalGitSnapshotProvider(fs::path root) : root_(std::move(root)) {}

std::optional<std::string> LocalGitSnapshotProvider::fetch(const std::string& repo, const std::string& sha,
                                                           SnapshotSide side, const std::string& path) const {
  if (!safe_relative(repo) || !safe_relative(path) || sha.empty() || sha.front() == '-') return std::nullopt;
  fs::path dir = root_ / repo;
  if (!fs::exists(dir)) {
    dir = root_ / (repo + ".git");
    if (!fs::exists(dir)) return std::nullopt;
  }
  const std::string rev = (side == SnapshotSide::Pre ? sha + "^" : sha) + ":" + path;
  return run_capture({"git", "-C", dir.string(), "show", rev});
}

std::string LocalGitSnapshotProvider::describe() const { return "git:" + root_.string(); }

std::unique_ptr<SnapshotProvider> open_snapshot_store(const std::string& spec) {
  std::string path = spec;
  bool git = false;
  if (starts_with(spec, "git:")) {
    git = true;
    path = spec.substr(4);
  } else if (starts_with(spec, "cache:")) {
    path = spec.substr(6);
  }
  if (path.empty() || !fs::is_directory(path)) throw ConfigError("snapshot store '" + path + "' is not a directory");
  if (git) return std::make_unique<LocalGitSnapshotProvider>(path);
  return std::make_unique<FileCacheSnapshotProvider>(path);
}

}  // namespace vfc::corpus
