#include "vfc_cli/io.hpp"

#include <unistd.h>

#include "vfc/error.hpp"
#include "vfc/text.hpp"

namespace vfc::cli {

namespace fs = std::filesystem;

AtomicFile::AtomicFile(fs::path target) : target_(std::move(target)) {
  tmp_ = target_;
  tmp_ += ".tmp." + std::to_string(::getpid());
  if (target_.has_parent_path() && !fs::exists(target_.parent_path()))
    throw IoError("output directory does not exist: " + target_.parent_path().string());
  out_.open(tmp_, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot write " + tmp_.string());
}

AtomicFile::~AtomicFile() {
  if (committed_) return;
  out_.close();
  std::error_code ec;
  fs::remove(tmp_, ec);
}

void AtomicFile::commit() {
  out_.flush();
  if (!out_) throw IoError("write failed for " + target_.string());
  out_.close();
  std::error_code ec;
  fs::rename(tmp_, target_, ec);
  if (ec) throw IoError("cannot rename onto " + target_.string() + ": " + ec.message());
  committed_ = true;
}

nlohmann::json FileDigest::to_json() const { return {{"path", path}, {"bytes", bytes}, {"fnv1a64", fnv1a64}}; }

FileDigest digest_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::uintmax_t bytes = 0;
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const auto got = static_cast<std::size_t>(in.gcount());
    h = fnv1a64(std::string_view(buf.data(), got), h);
    bytes += got;
  }
  return {path.string(), bytes, hex64(h)};
}

RecordReader::RecordReader(const fs::path& path) : in_(path) {
  if (!in_) throw IoError("cannot open record file " + path.string());
}

bool RecordReader::next(std::vector<corpus::CommitRecord>& batch, std::size_t max) {
  batch.clear();
  std::string line;
  while (batch.size() < max && std::getline(in_, line)) {
    ++line_;
    if (trim(line).empty()) continue;
    try {
      batch.push_back(corpus::record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("line " + std::to_string(line_) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line_) + ": " + e.what());
    }
  }
  return !batch.empty();
}

std::vector<corpus::CommitRecord> read_all_records(const fs::path& path) {
  RecordReader reader(path);
  std::vector<corpus::CommitRecord> all, batch;
  while (reader.next(batch, 4096)) std::move(batch.begin(), batch.end(), std::back_inserter(all));
  return all;
}

}  // namespace vfc::cli
