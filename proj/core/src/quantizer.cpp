#include "qcons/quantizer.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qcons {

Quantizer::Quantizer(int levels_each_side) : K(levels_each_side) {
  if (K < 1) throw std::invalid_argument("quantizer: K must be >= 1");
}

int quantize(const Quantizer& qz, double v) {
  if (!std::isfinite(v))
    throw std::invalid_argument("quantize: non-finite input");
  if (v <= -0.5) return -quantize(qz, -v);  // odd extension
  if (v < 0.5) return 0;
  if (v >= qz.K - 0.5) return qz.K;
  // v in [i - 1/2, i + 1/2) maps to i for 1 <= i <= K - 1.
  return static_cast<int>(std::floor(v + 0.5));
}

bool quantizer_saturated(const Quantizer& qz, double v) {
  if (!std::isfinite(v))
    throw std::invalid_argument("quantize: non-finite input");
  return std::fabs(v) > qz.K + 0.5;
}

int bits_per_symbol(const Quantizer& qz) {
  // ceil(log2(2K)) addresses the 2K nonzero levels; zero is silent.
  return std::bit_width(static_cast<unsigned>(2 * qz.K - 1));
}

}  // namespace qcons
