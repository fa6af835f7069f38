#include "lexbias/calibration.h"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "lexbias/bleu.h"
#include "lexbias/parallel.h"

namespace lexbias {

namespace {

std::string format_probe(const Probe& p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "BLEU(alpha=%g) = %.4f", p.alpha, p.bleu);
  return buf;
}

}  // namespace

void CalibrationSpec::validate() const {
  if (!std::isfinite(target_bleu)) throw std::invalid_argument("target BLEU must be finite");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  if (!(alpha_lo >= 0.0) || !(alpha_lo < alpha_hi) || !std::isfinite(alpha_hi)) {
    throw std::invalid_argument("alpha bracket must satisfy 0 <= alpha_lo < alpha_hi");
  }
  if (max_iters < 2) throw std::invalid_argument("max_iters must be >= 2 (both endpoints are probed)");
  base.validate();
}

BracketError::BracketError(double target, Probe lo_, Probe hi_)
    : std::runtime_error("target BLEU " + std::to_string(target) + " not bracketed: " + format_probe(lo_) + ", " +
                         format_probe(hi_)),
      lo(lo_),
      hi(hi_) {}

std::vector<DecodeResult> decode_all(const SequenceModel& model, std::span<const std::string> sentences,
                                     const SubwordVocab& vocab, const DecodeConfig& config, unsigned threads) {
  std::vector<DecodeResult> results(sentences.size());
  parallel_for(
      sentences.size(), [&](std::size_t i) { results[i] = decode(model, sentences[i], vocab, config); }, threads);
  return results;
}

double diversity_at(double alpha, const SequenceModel& model, std::span<const std::string> sentences,
                    const SubwordVocab& vocab, const DecodeConfig& base, unsigned threads) {
  if (sentences.empty()) throw std::invalid_argument("diversity_at needs at least one sentence");
  DecodeConfig config = base;
  config.alpha = alpha;
  const auto results = decode_all(model, sentences, vocab, config, threads);
  std::vector<BleuStats> stats;
  stats.reserve(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    // An empty output has no overlap with its input; count its reference length only.
    if (results[i].best.empty()) {
      BleuStats s = bleu_stats(sentences[i], sentences[i]);
      s.matches = {};
      s.counts = {};
      s.candidate_length = 0;
      stats.push_back(s);
    } else {
      stats.push_back(bleu_stats(results[i].best, sentences[i]));
    }
  }
  return corpus_bleu(stats);
}

CalibrationResult calibrate_alpha(const CalibrationSpec& spec, const SequenceModel& model,
                                  std::span<const std::string> sentences, const SubwordVocab& vocab) {
  spec.validate();
  CalibrationResult result;
  auto probe = [&](double alpha) {
    Probe p{alpha, diversity_at(alpha, model, sentences, vocab, spec.base, spec.threads)};
    result.probes.push_back(p);
    return p;
  };
  auto consider = [&](const Probe& p) {
    const double err = std::abs(p.bleu - spec.target_bleu);
    const double best_err = std::abs(result.achieved_bleu - spec.target_bleu);
    if (result.probes.size() == 1 || err < best_err || (err == best_err && p.alpha < result.alpha)) {
      result.alpha = p.alpha;
      result.achieved_bleu = p.bleu;
    }
    result.converged = std::abs(result.achieved_bleu - spec.target_bleu) <= spec.tolerance;
  };

  Probe lo = probe(spec.alpha_lo);
  consider(lo);
  if (result.converged) return result;
  Probe hi = probe(spec.alpha_hi);
  if (lo.bleu < spec.target_bleu - spec.tolerance || hi.bleu > spec.target_bleu + spec.tolerance) {
    throw BracketError(spec.target_bleu, lo, hi);
  }
  consider(hi);

  while (!result.converged && static_cast<int>(result.probes.size()) < spec.max_iters) {
    const Probe mid = probe(0.5 * (lo.alpha + hi.alpha));
    if (mid.bleu > lo.bleu || mid.bleu < hi.bleu) {
      result.warnings.push_back("non-monotone probe: " + format_probe(mid) + " outside [" + format_probe(hi) + ", " +
                                format_probe(lo) + "]");
    }
    consider(mid);
    if (mid.bleu > spec.target_bleu) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return result;
}

}  // namespace lexbias
