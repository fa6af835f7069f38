#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexbias/sequence_model.h"
#include "lexbias/subword_vocab.h"

namespace lexbias {

// Deterministic stand-in for an unbiased paraphraser: it always prefers to
// copy. At step t the t-th token of the source's greedy segmentation (then
// eos) scores 0 and every other token scores -margin. The scores are not a
// normalized distribution: with raw cumulative scoring any normalized version
// would prefer stopping early over copying. Only the prefix length matters,
// not its contents.
class CopyModel final : public SequenceModel {
 public:
  static constexpr double kDefaultMargin = 2.0;

  explicit CopyModel(const SubwordVocab& vocab, double margin = kDefaultMargin);

  std::size_t vocab_size() const override { return vocab_->size(); }
  std::vector<double> score_step(std::string_view source, std::span<const TokenId> prefix) const override;

  double margin() const { return margin_; }
  // Token the model favours after `prefix_len` tokens.
  TokenId copy_token(std::string_view source, std::size_t prefix_len) const;

 private:
  const SubwordVocab* vocab_;
  double margin_;
};

// Add-delta smoothed token n-gram model over the greedy segmentation of a
// training corpus (each line followed by eos).
//
// NOTE: this model ignores the source sentence completely. It exercises the
// interaction between penalties and fluency; it is not a paraphraser.
class NgramLM final : public SequenceModel {
 public:
  // Throws std::runtime_error for an unreadable or empty corpus and
  // std::invalid_argument for order < 1 or delta <= 0.
  static NgramLM train(const std::filesystem::path& corpus, int order, double delta, const SubwordVocab& vocab);
  static NgramLM train(const std::vector<std::string>& sentences, int order, double delta, const SubwordVocab& vocab);

  std::size_t vocab_size() const override { return vocab_->size(); }
  std::vector<double> score_step(std::string_view source, std::span<const TokenId> prefix) const override;

  int order() const { return order_; }
  double delta() const { return delta_; }
  // P(token | last order-1 tokens of prefix).
  double prob(std::span<const TokenId> prefix, TokenId token) const;

 private:
  struct ContextCounts {
    std::uint64_t total = 0;
    std::unordered_map<TokenId, std::uint64_t> next;
  };

  NgramLM(const SubwordVocab& vocab, int order, double delta) : vocab_(&vocab), order_(order), delta_(delta) {}

  std::span<const TokenId> context_of(std::span<const TokenId> prefix) const;
  const ContextCounts* lookup(std::span<const TokenId> context) const;

  const SubwordVocab* vocab_;
  int order_;
  double delta_;
  std::map<std::vector<TokenId>, ContextCounts> counts_;
};

// `copy[:g=REAL]` or `ngram:order=INT,delta=REAL,corpus=PATH`. The returned
// model keeps a reference to `vocab`. Throws std::invalid_argument on a
// malformed spec and std::runtime_error if the corpus cannot be read.
std::unique_ptr<SequenceModel> make_model(std::string_view spec, const SubwordVocab& vocab);

}  // namespace lexbias
