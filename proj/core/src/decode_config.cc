#include "lexbias/decode_config.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lexbias {

void DecodeConfig::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be finite and >= 0, got " + std::to_string(alpha));
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("beta must be finite and > 0, got " + std::to_string(beta));
  }
  if (max_order < 1) throw std::invalid_argument("max_order must be >= 1");
  if (beam_size < 1) throw std::invalid_argument("beam_size must be >= 1");
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  if (min_len < 0 || min_len > max_len) throw std::invalid_argument("min_len must lie in [0, max_len]");
}

}  // namespace lexbias
