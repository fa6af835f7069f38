#pragma once

#include <string>

#include "json.hpp"

namespace lexbias::cli {

// One line of `lexbias paraphrase` output.
struct RunRecord {
  std::string input;
  std::string output;
  double alpha = 0.0;
  double beta = 0.0;
  int beam = 0;
  double score = 0.0;
  double total_penalty = 0.0;
  double input_output_bleu = 0.0;
  bool truncated = false;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RunRecord, input, output, alpha, beta, beam, score, total_penalty,
                                   input_output_bleu, truncated)

}  // namespace lexbias::cli
