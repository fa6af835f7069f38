#include "lexbias/bleu.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lexbias/text.h"

namespace lexbias {

namespace {

using Counts = std::map<std::vector<std::string>, long>;

Counts count_ngrams(const std::vector<std::string>& tokens, std::size_t n) {
  Counts counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

std::vector<std::string> folded_tokens(std::string_view text, const char* side) {
  auto tokens = split_whitespace(casefold(text));
  if (tokens.empty()) throw std::invalid_argument(std::string("BLEU ") + side + " is empty");
  return tokens;
}

double bleu_from(const BleuStats& s, int orders) {
  if (orders == 0 || s.candidate_length == 0) return 0.0;
  double log_sum = 0.0;
  for (int n = 0; n < orders; ++n) {
    if (s.counts[n] == 0 || s.matches[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(s.matches[n]) / static_cast<double>(s.counts[n]));
  }
  const double ratio = static_cast<double>(s.reference_length) / static_cast<double>(s.candidate_length);
  const double bp = ratio > 1.0 ? std::exp(1.0 - ratio) : 1.0;
  return 100.0 * bp * std::exp(log_sum / orders);
}

}  // namespace

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  for (int n = 0; n < kBleuOrder; ++n) {
    matches[n] += other.matches[n];
    counts[n] += other.counts[n];
  }
  candidate_length += other.candidate_length;
  reference_length += other.reference_length;
  return *this;
}

BleuStats bleu_stats(std::string_view candidate, std::string_view reference) {
  const auto cand = folded_tokens(candidate, "candidate");
  const auto ref = folded_tokens(reference, "reference");
  BleuStats s;
  s.candidate_length = static_cast<long>(cand.size());
  s.reference_length = static_cast<long>(ref.size());
  for (int n = 1; n <= kBleuOrder; ++n) {
    const Counts c = count_ngrams(cand, static_cast<std::size_t>(n));
    const Counts r = count_ngrams(ref, static_cast<std::size_t>(n));
    for (const auto& [gram, k] : c) {
      s.counts[n - 1] += k;
      auto it = r.find(gram);
      if (it != r.end()) s.matches[n - 1] += std::min(k, it->second);
    }
  }
  return s;
}

double corpus_bleu(std::span<const BleuStats> stats) {
  if (stats.empty()) throw std::invalid_argument("corpus_bleu needs at least one sentence");
  BleuStats total;
  for (const auto& s : stats) total += s;
  return bleu_from(total, kBleuOrder);
}

double sentence_bleu(std::string_view candidate, std::string_view reference) {
  const BleuStats s = bleu_stats(candidate, reference);
  int orders = 0;
  while (orders < kBleuOrder && s.counts[orders] > 0) ++orders;
  return bleu_from(s, orders);
}

std::array<double, kBleuOrder> overlap_profile(std::string_view candidate, std::string_view reference) {
  const BleuStats s = bleu_stats(candidate, reference);
  std::array<double, kBleuOrder> out{};
  for (int n = 0; n < kBleuOrder; ++n) {
    out[n] = s.counts[n] == 0 ? 0.0 : static_cast<double>(s.matches[n]) / static_cast<double>(s.counts[n]);
  }
  return out;
}

}  // namespace lexbias
