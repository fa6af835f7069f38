#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexbias/decode_config.h"
#include "lexbias/subword_vocab.h"

namespace lexbias {

using WordNgram = std::vector<std::string>;

// Every contiguous word n-gram of the input for n = 1..min(max_order, #words),
// case-folded and deduplicated, in lexicographic order. Throws
// std::invalid_argument for whitespace-only input or max_order < 1.
std::vector<WordNgram> extract_ngrams(std::string_view input, int max_order);

// alpha * n^beta.
double ngram_penalty(double alpha, double beta, int n);

struct TokenPenalty {
  TokenId id = 0;
  double penalty = 0.0;

  friend bool operator==(const TokenPenalty&, const TokenPenalty&) = default;
};

// Maps the first n-1 words of each input n-gram to the word-initial subwords
// that begin its last word, and the penalty for emitting one of them right
// after that context. Immutable once built; one table per input sentence.
class PenaltyTable {
 public:
  struct Entry {
    std::vector<std::string> context;  // folded words, fewer than max_order
    std::vector<TokenPenalty> penalties;  // sorted by id
  };

  PenaltyTable() = default;

  int max_order() const { return max_order_; }
  bool empty() const { return entries_.empty(); }
  // Sorted by context, then token id.
  std::span<const Entry> entries() const { return entries_; }
  const Entry* find(std::span<const std::string> context) const;

  // Combined penalty per token for the next step, given the most recent
  // complete hypothesis words (folded, oldest first). Each suffix of length
  // 0..max_order-1 is looked up; the largest penalty per token wins. Sorted by
  // id, zero-penalty tokens omitted.
  std::vector<TokenPenalty> adjustments(std::span<const std::string> word_suffix) const;

  // logprobs minus adjustments(word_suffix). Throws std::invalid_argument when
  // logprobs.size() differs from the vocab size the table was built for.
  std::vector<double> penalize(std::span<const std::string> word_suffix, std::span<const double> logprobs) const;

  // {"max_order": n, "entries": [{"context": [...], "penalties": {"<raw>": v}}]}
  // with values printed to 6 decimal places. Byte-stable across runs.
  std::string to_json(const SubwordVocab& vocab) const;

  friend PenaltyTable build_penalties(std::string_view input, const SubwordVocab& vocab,
                                      const DecodeConfig& config);

 private:
  static std::string encode(std::span<const std::string> context);

  int max_order_ = 4;
  std::size_t vocab_size_ = 0;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Penalties for one input sentence. When several n-grams charge the same
// (context, subword) pair the largest penalty is kept. alpha == 0 yields an
// empty table.
PenaltyTable build_penalties(std::string_view input, const SubwordVocab& vocab, const DecodeConfig& config);

}  // namespace lexbias
