#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lexbias/decode_config.h"
#include "lexbias/penalty_table.h"
#include "lexbias/sequence_model.h"
#include "lexbias/subword_vocab.h"

namespace lexbias {

struct Hypothesis {
  std::vector<TokenId> tokens;
  // Sum over steps of (model log-prob - penalty charged).
  double score = 0.0;
  double model_score = 0.0;
  double penalty = 0.0;
  // Last max_order-1 finished words, folded, oldest first.
  std::vector<std::string> complete_words;
  // Surface of the word currently being generated.
  std::string pending;
  bool finished = false;
};

// Folded words that precede the next word to be started: complete_words plus
// the pending word, trimmed to the last max_order-1. This is the suffix the
// penalty table is queried with, since emitting a word-initial subword closes
// the pending word.
std::vector<std::string> context_words(const Hypothesis& hyp, int max_order);

// Appends `subword` and updates the word state. Throws std::logic_error when
// hyp is already finished. Scores are left untouched.
Hypothesis advance_word_state(Hypothesis hyp, const Subword& subword, TokenId eos_id, int max_order);

struct ScoredOutput {
  std::string text;
  std::vector<TokenId> tokens;
  double score = 0.0;
  double model_score = 0.0;
  double penalty = 0.0;
};

struct DecodeResult {
  std::string best;
  std::vector<TokenId> best_tokens;
  double score = 0.0;
  double model_score = 0.0;
  // Penalties charged along the best hypothesis.
  double total_penalty = 0.0;
  // Best first. Ranked by score (or score/length with length_normalize).
  std::vector<ScoredOutput> n_best;
  int steps = 0;
  // No hypothesis emitted eos within max_len; best is the top partial one.
  bool truncated = false;
};

// Beam search over model scores minus n-gram penalties built from `source`.
// Stops at max_len, or once beam_size hypotheses have finished and no live
// hypothesis outscores the worst of the best beam_size finished ones.
// Throws std::invalid_argument for an invalid config or empty source and
// std::runtime_error if the model returns a vector of the wrong size.
DecodeResult decode(const SequenceModel& model, std::string_view source, const SubwordVocab& vocab,
                    const DecodeConfig& config);

// Same search with an externally built table (an empty table disables
// penalization).
DecodeResult decode_with_table(const SequenceModel& model, std::string_view source, const SubwordVocab& vocab,
                               const DecodeConfig& config, const PenaltyTable& table);

}  // namespace lexbias
