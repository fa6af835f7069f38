#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "lexbias/subword_vocab.h"

namespace lexbias {

// p(y | embed(x)) seen one step at a time. Implementations must be
// deterministic and safe to call concurrently from several threads.
class SequenceModel {
 public:
  virtual ~SequenceModel() = default;

  virtual std::size_t vocab_size() const = 0;

  // Natural-log next-token distribution over the whole vocab given the source
  // sentence and the target prefix generated so far.
  virtual std::vector<double> score_step(std::string_view source, std::span<const TokenId> prefix) const = 0;
};

}  // namespace lexbias
