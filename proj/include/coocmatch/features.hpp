#pragma once

#include <vector>

#include "coocmatch/image.hpp"

namespace coocmatch {

// Per-channel planes of derived feature values, row-major.
struct FeatureTensor {
  int planes = 0;
  int height = 0;
  int width = 0;
  std::vector<double> data;

  double& at(int p, int y, int x) {
    return data[(static_cast<std::size_t>(p) * height + y) * width + x];
  }
  double at(int p, int y, int x) const {
    return data[(static_cast<std::size_t>(p) * height + y) * width + x];
  }
};

// Per channel: centered unitary 2D DFT -> magnitude -> log(x + 1e-6) ->
// affine rescale of the whole tensor to [-1, 1]. A constant log tensor
// (degenerate range) maps to all zeros.
FeatureTensor dft_feature(const ImageBuffer& image);

// Channel-standardized pixels: (x - 255*mean_c) / (255*std_c) with the
// usual ImageNet mean/std. Requires 3 channels.
FeatureTensor direct_feature(const ImageBuffer& image);

}  // namespace coocmatch
