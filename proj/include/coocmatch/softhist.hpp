#pragma once

#include <vector>

#include "coocmatch/cooc.hpp"
#include "coocmatch/geometry.hpp"
#include "coocmatch/image.hpp"
#include "coocmatch/kernels.hpp"

namespace coocmatch {

// Gradient wrt every pixel; same layout as the image it was taken at.
struct GradBuffer {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<double> data;

  GradBuffer() = default;
  GradBuffer(int h, int w, int c)
      : height(h), width(w), channels(c),
        data(static_cast<std::size_t>(h) * w * c, 0.0) {}

  double& at(int y, int x, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  double at(int y, int x, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

// Bins needed so the kernel support of every value in [0, max/divisor] stays
// inside the histogram: ceil(max/divisor) + 1. Equals floor(max/divisor)+1
// whenever max/divisor is integral (256 at divisor 1 for 8-bit data).
int soft_bins_for_divisor(double divisor, double max_value = 255.0);

// Differentiable co-occurrence: every pixel pair spreads kernel weight over
// at most 4 bins of C[i][j] = sum f(a/divisor - i) * f(b/divisor - j).
// Integer-mode input is promoted to real. For in-range values the entry sum
// of each matrix equals its pair count; values outside [0, 255] (noisy
// evaluation points) lose the share that falls outside the axis.
CoocStack soft_cooc(const ImageBuffer& image, const PairGeometry& geometry,
                    InterpKernel kernel, double divisor = 1.0);

// Pullback of a per-bin seed through soft_cooc. seed must have the shape
// soft_cooc produces for this geometry/divisor.
GradBuffer soft_cooc_grad(const ImageBuffer& image, const PairGeometry& geometry,
                          InterpKernel kernel, double divisor,
                          const CoocStack& seed);

// Resolution pyramid: level n divides values by 2^n and weights its L1 term
// by 2^n. Nine levels cover 8-bit data down to a 2-bin axis.
struct PyramidSpec {
  int levels = 9;
  static int weight(int n) { return 1 << n; }
  static double divisor(int n) { return static_cast<double>(1 << n); }
};

// Mass-normalized soft co-occurrence stacks of the reference image at every
// pyramid level, one stack per geometry. Computed once per attack.
struct PyramidTargets {
  PyramidSpec spec;
  InterpKernel kernel = InterpKernel::raised_cosine;
  std::vector<PairGeometry> geometries;
  int height = 0, width = 0, channels = 0;
  std::vector<std::vector<CoocStack>> normalized;  // [level][geometry]
};

PyramidTargets precompute_pyramid_targets(const ImageBuffer& target,
                                          const PyramidSpec& spec,
                                          InterpKernel kernel,
                                          std::vector<PairGeometry> geometries);

struct LossGrad {
  double loss = 0.0;
  GradBuffer grad;
};

// sum_n 2^n * sum_pairs || S_n(a)/count - T_n ||_1 where S_n is the soft
// stack of `a` at level n. L1 subgradient at 0 is 0. The gradient includes
// the 1/2^n chain factor from the value scaling.
LossGrad pyramid_loss(const ImageBuffer& a, const PyramidTargets& targets);

}  // namespace coocmatch
