#include "qcons/codec.hpp"

#include <cmath>
#include <stdexcept>

namespace qcons {

void validate(const ScalingSchedule& s) {
  if (!(s.beta0 > 0.0))
    throw std::invalid_argument("schedule: beta0 must be > 0");
  if (!(s.gamma > 0.0 && s.gamma < 1.0))
    throw std::invalid_argument("schedule: gamma must lie in (0, 1)");
  if (s.mode == ScalingMode::Floored && !(s.floor > 0.0))
    throw std::invalid_argument("schedule: floored mode needs floor > 0");
}

double scaling_at(const ScalingSchedule& s, long k) {
  if (k < 0) throw std::invalid_argument("scaling_at: k must be >= 0");
  double geo = s.beta0 * std::pow(s.gamma, static_cast<double>(k));
  if (s.mode == ScalingMode::Floored) return std::max(geo, s.floor);
  return geo;
}

long floor_step(const ScalingSchedule& s) {
  if (s.mode != ScalingMode::Floored)
    throw std::invalid_argument("floor_step: schedule has no floor");
  validate(s);
  if (s.beta0 <= s.floor) return 0;
  // Smallest k with beta0 gamma^k <= floor; the 1e-12 guard keeps an exact
  // ratio (floor == beta0 gamma^m) from landing one step late.
  double k = std::log(s.floor / s.beta0) / std::log(s.gamma);
  long candidate = static_cast<long>(std::ceil(k - 1e-12));
  while (candidate > 0 && scaling_at(s, candidate - 1) <= s.floor) --candidate;
  while (s.beta0 * std::pow(s.gamma, static_cast<double>(candidate)) > s.floor)
    ++candidate;
  return candidate;
}

EncodeResult encode_step(EncoderState& enc, double s_new, double beta_k,
                         const Quantizer& qz) {
  if (!(beta_k > 0.0))
    throw std::invalid_argument("encode_step: beta must be > 0");
  EncodeResult res;
  res.scaled_innovation = (s_new - enc.xi) / beta_k;
  res.symbol = quantize(qz, res.scaled_innovation);
  res.saturated = quantizer_saturated(qz, res.scaled_innovation);
  enc.xi = enc.xi + beta_k * res.symbol;
  enc.step += 1;
  return res;
}

void decode_step(DecoderState& dec, int symbol, double beta_k,
                 const Quantizer& qz) {
  if (!(beta_k > 0.0))
    throw std::invalid_argument("decode_step: beta must be > 0");
  if (symbol < -qz.K || symbol > qz.K)
    throw std::invalid_argument("decode_step: symbol outside level range");
  // Same expression as the encoder update, so the states match bit for bit.
  dec.s_hat = dec.s_hat + beta_k * symbol;
  dec.step += 1;
}

}  // namespace qcons
