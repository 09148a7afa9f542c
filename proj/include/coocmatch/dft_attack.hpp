#pragma once

#include <vector>

#include "coocmatch/image.hpp"

namespace coocmatch {

// |transfer|^2 of the 3x3 residual prediction filter on an h x w grid under
// circular convolution. Zero along both DC axes, non-negative everywhere.
struct FreqWeights {
  int height = 0;
  int width = 0;
  std::vector<double> response;

  double at(int u, int v) const {
    return response[static_cast<std::size_t>(u) * width + v];
  }
};

// The spatial 3x3 kernel is recovered from its known centered 3x3 unitary
// DFT (corners 3/4, zero elsewhere) by an inverse 3x3 unitary DFT, then
// zero-padded circularly onto the full grid and transformed. Requires
// h, w >= 3.
FreqWeights kirchner_response(int h, int w);

// Cached immutable per-size responses; safe for concurrent callers.
const FreqWeights& kirchner_response_cached(int h, int w);

// Per-channel closed-form minimizer of
//   ||f * X - f * target||^2 + lambda^2 ||X - source||^2
// under circular convolution: in frequency space
//   X = (W .* F(target) + lambda^2 F(source)) / (W + lambda^2).
// Returns the raw real-valued solution, before clamping and rounding.
ImageBuffer dft_attack_blend(const ImageBuffer& source,
                             const ImageBuffer& target, double lambda);

// dft_attack_blend, then clamp to [0,255] and round ties-to-even.
ImageBuffer dft_attack(const ImageBuffer& source, const ImageBuffer& target,
                       double lambda);

// Largest |imaginary| residue the last inverse transform in this thread
// produced; diagnostics for the real-output check.
double dft_attack_imag_residue();

}  // namespace coocmatch
