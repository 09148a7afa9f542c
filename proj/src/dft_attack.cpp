#include "coocmatch/dft_attack.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "coocmatch/fft.hpp"

namespace coocmatch {

namespace {

constexpr double kPi = 3.14159265358979323846;

thread_local double last_imag_residue = 0.0;

// Spatial taps of the residual filter, indexed [dy+1][dx+1].
// Derived once from the centered 3x3 unitary spectrum with 3/4 corners.
std::array<std::array<double, 3>, 3> spatial_kernel3() {
  // centered spectrum, frequencies -1..1 on both axes
  double centered[3][3] = {{0.75, 0.0, 0.75},
                           {0.0, 0.0, 0.0},
                           {0.75, 0.0, 0.75}};
  // uncenter: centered index m maps to DFT index (m - 1) mod 3
  std::complex<double> spec[3][3];
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n)
      spec[(m + 2) % 3][(n + 2) % 3] = centered[m][n];

  std::array<std::array<double, 3>, 3> taps{};
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) {
      std::complex<double> acc = 0.0;
      for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v) {
          double phase = 2.0 * kPi * (u * k + v * l) / 3.0;
          acc += spec[u][v] * std::complex<double>(std::cos(phase),
                                                   std::sin(phase));
        }
      acc /= 3.0;  // unitary inverse
      // spatial index k is the circular offset; store centered at [dy+1]
      int dy = k == 2 ? -1 : k;
      int dx = l == 2 ? -1 : l;
      taps[dy + 1][dx + 1] = acc.real();
    }
  return taps;
}

}  // namespace

FreqWeights kirchner_response(int h, int w) {
  if (h < 3 || w < 3)
    throw std::invalid_argument("kirchner_response: grid must be >= 3x3");

  auto taps = spatial_kernel3();
  std::vector<std::complex<double>> grid(static_cast<std::size_t>(h) * w, 0.0);
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) {
      int y = (dy + h) % h;
      int x = (dx + w) % w;
      grid[static_cast<std::size_t>(y) * w + x] += taps[dy + 1][dx + 1];
    }
  fft2d(grid, h, w, false);

  FreqWeights out;
  out.height = h;
  out.width = w;
  out.response.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    out.response[i] = std::norm(grid[i]);
  return out;
}

const FreqWeights& kirchner_response_cached(int h, int w) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<FreqWeights>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{h, w}];
  if (!slot) slot = std::make_unique<FreqWeights>(kirchner_response(h, w));
  return *slot;
}

ImageBuffer dft_attack_blend(const ImageBuffer& source,
                             const ImageBuffer& target, double lambda) {
  if (!source.same_shape(target))
    throw std::invalid_argument("dft_attack: source/target shape mismatch");
  if (!(lambda > 0.0))
    throw std::invalid_argument("dft_attack: lambda must be > 0");
  source.validate();
  target.validate();

  const int h = source.height(), w = source.width(), ch = source.channels();
  const FreqWeights& weights = kirchner_response_cached(h, w);
  const double l2 = lambda * lambda;

  ImageBuffer out(h, w, ch, PixelMode::real);
  std::vector<std::complex<double>> fs(static_cast<std::size_t>(h) * w);
  std::vector<std::complex<double>> ft(fs.size());

  double residue = 0.0;
  for (int c = 0; c < ch; ++c) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        std::size_t i = static_cast<std::size_t>(y) * w + x;
        fs[i] = source.at(y, x, c);
        ft[i] = target.at(y, x, c);
      }
    fft2d(fs, h, w, false);
    fft2d(ft, h, w, false);
    for (std::size_t i = 0; i < fs.size(); ++i)
      fs[i] = (weights.response[i] * ft[i] + l2 * fs[i]) /
              (weights.response[i] + l2);
    fft2d(fs, h, w, true);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        std::complex<double> v = fs[static_cast<std::size_t>(y) * w + x];
        residue = std::max(residue, std::fabs(v.imag()));
        out.at(y, x, c) = v.real();
      }
  }
  last_imag_residue = residue;
  return out;
}

ImageBuffer dft_attack(const ImageBuffer& source, const ImageBuffer& target,
                       double lambda) {
  ImageBuffer blend = dft_attack_blend(source, target, lambda);
  for (double& v : blend.data()) v = v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v);
  return blend.rounded();
}

double dft_attack_imag_residue() { return last_imag_residue; }

}  // namespace coocmatch
