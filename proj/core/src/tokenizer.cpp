#include "vfc/tokenizer.hpp"

#include <cctype>
#include <fstream>

#include "vfc/error.hpp"
#include "vfc/text.hpp"

namespace vfc {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_word(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) || c == '_';
}

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) return 2;
  if ((lead & 0xF0) == 0xE0) return 3;
  if ((lead & 0xF8) == 0xF0) return 4;
  return 1;
}

}  // namespace

Tokenizer Tokenizer::builtin() { return Tokenizer("builtin", Mode::BuiltinApprox); }

Tokenizer Tokenizer::from_vocab(std::vector<std::string> vocab, std::string name) {
  Tokenizer t(std::move(name), Mode::ExternalVocab);
  for (auto& piece : vocab) {
    if (piece.empty()) continue;
    t.max_piece_ = std::max(t.max_piece_, piece.size());
    t.vocab_.insert(std::move(piece));
  }
  if (t.vocab_.empty()) throw ConfigError("tokenizer vocabulary is empty");
  return t;
}

Tokenizer Tokenizer::from_vocab_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read vocabulary file '" + path.string() + "'");
  std::vector<std::string> vocab;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    vocab.push_back(line);
  }
  return from_vocab(std::move(vocab), "vocab:" + path.string());
}

Tokenizer Tokenizer::from_spec(std::string_view spec) {
  if (spec.empty() || spec == "builtin") return builtin();
  if (starts_with(spec, "vocab:")) return from_vocab_file(std::string(spec.substr(6)));
  throw ConfigError("unknown tokenizer '" + std::string(spec) + "' (expected builtin or vocab:<path>)");
}

void Tokenizer::vocab_chunk(std::string_view text, std::size_t begin, std::size_t end,
                            std::vector<TokenSpan>& out) const {
  std::size_t i = begin;
  while (i < end) {
    std::size_t best = 0;
    const std::size_t limit = std::min(max_piece_, end - i);
    for (std::size_t len = limit; len > 0; --len) {
      if (vocab_.count(std::string(text.substr(i, len)))) {
        best = len;
        break;
      }
    }
    if (best == 0) best = std::min(utf8_length(static_cast<unsigned char>(text[i])), end - i);
    out.push_back({i, i + best});
    i += best;
  }
}

std::vector<TokenSpan> Tokenizer::spans(std::string_view text) const {
  std::vector<TokenSpan> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && !is_space(text[j])) ++j;
    if (mode_ == Mode::ExternalVocab) {
      vocab_chunk(text, i, j, out);
    } else {
      std::size_t k = i;
      while (k < j) {
        if (is_word(text[k])) {
          std::size_t e = k;
          while (e < j && is_word(text[e])) ++e;
          out.push_back({k, e});
          k = e;
        } else {
          out.push_back({k, k + 1});
          ++k;
        }
      }
    }
    i = j;
  }
  return out;
}

std::size_t Tokenizer::count(std::string_view text) const { return spans(text).size(); }

}  // namespace vfc
