#pragma once

#include "qcons/quantizer.hpp"

namespace qcons {

enum class ScalingMode { Geometric, Floored };

// Per round quantizer gain beta(k). Geometric: beta0 * gamma^k. Floored:
// max(beta0 * gamma^k, floor); the positive floor keeps a bounded estimation
// error from saturating the quantizer once the geometric part has decayed.
struct ScalingSchedule {
  double beta0 = 1.0;
  double gamma = 0.5;
  ScalingMode mode = ScalingMode::Geometric;
  double floor = 0.0;  // used by Floored only
};

// beta0 > 0, gamma in (0, 1), and floor > 0 in Floored mode.
void validate(const ScalingSchedule& s);

double scaling_at(const ScalingSchedule& s, long k);

// Smallest k with scaling_at(k) == floor. 0 when beta0 <= floor. Throws in
// Geometric mode.
long floor_step(const ScalingSchedule& s);

// One scalar channel. The encoder tracks its own transmissions through xi;
// every decoder of the same channel reproduces xi exactly because both sides
// run the identical update on the identical integer symbols.
struct EncoderState {
  double xi = 0.0;
  long step = 0;  // rounds encoded so far
};

struct DecoderState {
  double s_hat = 0.0;
  long step = 0;
};

struct EncodeResult {
  int symbol = 0;
  bool saturated = false;     // scaled innovation exceeded K + 1/2
  double scaled_innovation = 0.0;
};

// Quantizes (s_new - xi) / beta_k, then xi += beta_k * symbol.
EncodeResult encode_step(EncoderState& enc, double s_new, double beta_k,
                         const Quantizer& qz);

// Mirror update. Throws std::invalid_argument when |symbol| > K.
void decode_step(DecoderState& dec, int symbol, double beta_k,
                 const Quantizer& qz);

}  // namespace qcons
