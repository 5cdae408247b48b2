#pragma once

namespace qcons {

// Symmetric uniform quantizer with 2K+1 output levels {-K, ..., 0, ..., K}.
// K == 1 is the one-bit case.
struct Quantizer {
  int K = 1;

  explicit Quantizer(int levels_each_side);  // throws when K < 1
};

// Level map: 0 on (-1/2, 1/2), i on [(2i-1)/2, (2i+1)/2) for 1 <= i < K,
// K for v >= (2K-1)/2, odd extension for v <= -1/2. Throws on non-finite v.
int quantize(const Quantizer& qz, double v);

// True when |v| > K + 1/2, i.e. the level error bound 1/2 no longer holds.
bool quantizer_saturated(const Quantizer& qz, double v);

// Bits to address the 2K nonzero levels; the zero symbol is conveyed by
// sending nothing.
int bits_per_symbol(const Quantizer& qz);

}  // namespace qcons
