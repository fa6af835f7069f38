#pragma once

#include <array>
#include <span>
#include <string_view>

namespace lexbias {

inline constexpr int kBleuOrder = 4;

// Sufficient statistics for uncased BLEU over whitespace tokens. Additive
// across sentences.
struct BleuStats {
  std::array<long, kBleuOrder> matches{};  // clipped, index n-1
  std::array<long, kBleuOrder> counts{};   // candidate n-grams, index n-1
  long candidate_length = 0;
  long reference_length = 0;

  BleuStats& operator+=(const BleuStats& other);
  friend bool operator==(const BleuStats&, const BleuStats&) = default;
};

// Both sides are case-folded and split on whitespace. Throws
// std::invalid_argument if either side has no tokens.
BleuStats bleu_stats(std::string_view candidate, std::string_view reference);

// 100 * BP * geometric mean of the four summed precisions. Any zero
// precision (including an order with no candidate n-grams) gives 0; no
// smoothing. Throws std::invalid_argument on an empty list.
double corpus_bleu(std::span<const BleuStats> stats);

// Single-sentence score that averages only over orders the candidate is long
// enough to have, so short identical sentences still score 100.
double sentence_bleu(std::string_view candidate, std::string_view reference);

// matches[n]/counts[n] per order, 0 where the candidate has no n-grams.
std::array<double, kBleuOrder> overlap_profile(std::string_view candidate, std::string_view reference);

}  // namespace lexbias
