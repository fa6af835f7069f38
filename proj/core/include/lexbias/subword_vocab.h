#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lexbias {

using TokenId = std::int32_t;

// SentencePiece word-boundary marker, U+2581 LOWER ONE EIGHTH BLOCK.
inline constexpr std::string_view kWordBoundary = "\xE2\x96\x81";
inline constexpr std::string_view kEosToken = "</s>";
inline constexpr std::string_view kUnkToken = "<unk>";

struct Subword {
  TokenId id = 0;
  std::string raw;
  bool word_initial = false;
  std::string surface;
  std::string surface_folded;
};

// Immutable after construction; safe to share across threads.
class SubwordVocab {
 public:
  // One token per line, line number = token id. Throws std::runtime_error on
  // an unreadable or empty file, a duplicate token, or a missing `</s>` or
  // `<unk>`.
  static SubwordVocab load(const std::filesystem::path& path);
  static SubwordVocab from_tokens(std::vector<std::string> tokens);

  std::size_t size() const { return subwords_.size(); }
  const Subword& operator[](TokenId id) const { return subwords_[static_cast<std::size_t>(id)]; }
  const Subword& at(TokenId id) const;
  std::span<const Subword> subwords() const { return subwords_; }
  bool valid(TokenId id) const { return id >= 0 && static_cast<std::size_t>(id) < subwords_.size(); }

  TokenId eos_id() const { return eos_id_; }
  TokenId unk_id() const { return unk_id_; }
  std::optional<TokenId> find(std::string_view raw) const;

  // Word-initial subwords whose folded surface equals `folded_surface`.
  std::span<const TokenId> word_initial_with_surface(std::string_view folded_surface) const;

  // Word-initial subwords whose folded surface is a nonempty prefix of the
  // folded word. All case variants are included. Sorted by id.
  std::vector<TokenId> subwords_beginning(std::string_view word) const;

  // Rebuilds words from a token sequence. A word-initial subword starts a new
  // word; anything else extends the current one (a leading continuation piece
  // starts word 1, a bare marker yields no word). The trailing word is kept
  // only if the sequence ends with eos or `finalize` is set. Throws std::out_of_range on an invalid id and
  // std::invalid_argument on an eos before the end.
  std::vector<std::string> words_from_tokens(std::span<const TokenId> ids, bool finalize = false) const;

  // Greedy longest-match segmentation of whitespace-separated words. Each
  // word's first piece must be word-initial; a code point no piece covers
  // becomes `<unk>`.
  std::vector<TokenId> segment(std::string_view text) const;

 private:
  explicit SubwordVocab(std::vector<Subword> subwords, TokenId eos, TokenId unk);

  void segment_word(std::string_view word, std::vector<TokenId>& out) const;

  std::vector<Subword> subwords_;
  TokenId eos_id_ = 0;
  TokenId unk_id_ = 0;
  std::unordered_map<std::string, TokenId> by_raw_;
  std::unordered_map<std::string, std::vector<TokenId>> prefix_index_;
  std::unordered_map<std::string, TokenId> initial_exact_;
  std::unordered_map<std::string, TokenId> continuation_exact_;
  std::size_t max_surface_bytes_ = 0;
};

}  // namespace lexbias
