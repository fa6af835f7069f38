#pragma once

#include <span>
#include <string>
#include <vector>

#include "lexbias/beam_decoder.h"
#include "lexbias/decode_config.h"
#include "lexbias/sequence_model.h"
#include "lexbias/subword_vocab.h"

namespace lexbias {

struct CalibrationSpec {
  double target_bleu = 0.0;
  double tolerance = 1.0;
  double alpha_lo = 0.0;
  double alpha_hi = 0.05;
  // Total diversity probes, endpoints included.
  int max_iters = 20;
  // alpha is overwritten by each probe.
  DecodeConfig base;
  unsigned threads = 0;

  void validate() const;
};

struct Probe {
  double alpha = 0.0;
  double bleu = 0.0;
};

struct CalibrationResult {
  double alpha = 0.0;
  double achieved_bleu = 0.0;
  bool converged = false;
  std::vector<Probe> probes;
  std::vector<std::string> warnings;
};

// Thrown when the target lies outside [BLEU(alpha_hi), BLEU(alpha_lo)] by more
// than the tolerance.
class BracketError : public std::runtime_error {
 public:
  BracketError(double target, Probe lo, Probe hi);
  Probe lo;
  Probe hi;
};

// Decodes every sentence at the given alpha (in parallel, results kept in
// input order).
std::vector<DecodeResult> decode_all(const SequenceModel& model, std::span<const std::string> sentences,
                                     const SubwordVocab& vocab, const DecodeConfig& config, unsigned threads = 0);

// Corpus BLEU between each input and its decoded output.
double diversity_at(double alpha, const SequenceModel& model, std::span<const std::string> sentences,
                    const SubwordVocab& vocab, const DecodeConfig& base, unsigned threads = 0);

// Bisection on alpha, treating BLEU as non-increasing in alpha. Keeps the
// probe closest to the target (ties go to the smaller alpha) and records a
// warning whenever a probe breaks monotonicity against the current bracket.
CalibrationResult calibrate_alpha(const CalibrationSpec& spec, const SequenceModel& model,
                                  std::span<const std::string> sentences, const SubwordVocab& vocab);

}  // namespace lexbias
