#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace vfc {

/// Byte range of one token inside the counted text.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Deterministic token counter. `count("") == 0` for every mode.
///
/// The builtin approximation splits on whitespace and then emits every
/// punctuation or operator character as its own token; runs of letters,
/// digits, '_' and non-ASCII bytes form one token. The vocabulary mode
/// applies a subword vocabulary greedily (longest match first) inside each
/// whitespace-delimited chunk; characters no entry covers become single
/// unknown tokens.
class Tokenizer {
 public:
  enum class Mode { BuiltinApprox, ExternalVocab };

  static Tokenizer builtin();
  static Tokenizer from_vocab(std::vector<std::string> vocab, std::string name = "vocab");
  /// One token per line, UTF-8. Throws ConfigError if unreadable or empty.
  static Tokenizer from_vocab_file(const std::filesystem::path& path);
  /// "builtin" or "vocab:<path>".
  static Tokenizer from_spec(std::string_view spec);

  const std::string& name() const { return name_; }
  Mode mode() const { return mode_; }

  std::vector<TokenSpan> spans(std::string_view text) const;
  std::size_t count(std::string_view text) const;

 private:
  Tokenizer(std::string name, Mode mode) : name_(std::move(name)), mode_(mode) {}

  void vocab_chunk(std::string_view text, std::size_t begin, std::size_t end,
                   std::vector<TokenSpan>& out) const;

  std::string name_;
  Mode mode_;
  std::unordered_set<std::string> vocab_;
  std::size_t max_piece_ = 0;
};

}  // namespace vfc
