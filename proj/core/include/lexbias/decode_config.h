#pragma once

namespace lexbias {

// Penalty weights and beam settings. A subword that would begin the last word
// of an input n-gram is charged alpha * n^beta.
struct DecodeConfig {
  double alpha = 0.003;
  double beta = 4.0;
  int max_order = 4;
  int beam_size = 5;
  int max_len = 200;
  // Non-eos tokens required before eos may be emitted.
  int min_len = 1;
  // Rank finished hypotheses by score / length. Pruning always uses raw score.
  bool length_normalize = false;

  // Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

// The operating points used for English paraphrasing.
inline constexpr double kAlphaPresets[] = {0.0005, 0.003, 0.006};

}  // namespace lexbias
