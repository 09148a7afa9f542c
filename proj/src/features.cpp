#include "coocmatch/features.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "coocmatch/fft.hpp"

namespace coocmatch {

FeatureTensor dft_feature(const ImageBuffer& image) {
  const int h = image.height(), w = image.width(), ch = image.channels();
  FeatureTensor out;
  out.planes = ch;
  out.height = h;
  out.width = w;
  out.data.assign(static_cast<std::size_t>(ch) * h * w, 0.0);

  const double unitary = 1.0 / std::sqrt(static_cast<double>(h) * w);
  std::vector<std::complex<double>> grid(static_cast<std::size_t>(h) * w);

  for (int c = 0; c < ch; ++c) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        grid[static_cast<std::size_t>(y) * w + x] = image.at(y, x, c);
    fft2d(grid, h, w, false);
    // shift the zero frequency to the center, then log magnitude
    for (int u = 0; u < h; ++u)
      for (int v = 0; v < w; ++v) {
        int cu = (u + h / 2) % h;
        int cv = (v + w / 2) % w;
        double mag = std::abs(grid[static_cast<std::size_t>(u) * w + v]) * unitary;
        out.at(c, cu, cv) = std::log(mag + 1e-6);
      }
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : out.data) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi > lo) {
    double scale = 2.0 / (hi - lo);
    for (double& v : out.data) v = (v - lo) * scale - 1.0;
  } else {
    for (double& v : out.data) v = 0.0;
  }
  return out;
}

FeatureTensor direct_feature(const ImageBuffer& image) {
  if (image.channels() != 3)
    throw std::invalid_argument("direct_feature: needs a 3-channel image");
  static const double mean[3] = {0.485, 0.456, 0.406};
  static const double stddev[3] = {0.229, 0.224, 0.225};

  const int h = image.height(), w = image.width();
  FeatureTensor out;
  out.planes = 3;
  out.height = h;
  out.width = w;
  out.data.assign(static_cast<std::size_t>(3) * h * w, 0.0);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        out.at(c, y, x) =
            (image.at(y, x, c) - 255.0 * mean[c]) / (255.0 * stddev[c]);
  return out;
}

}  // namespace coocmatch
