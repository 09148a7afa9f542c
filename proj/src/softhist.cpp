#include "coocmatch/softhist.hpp"

#include <cmath>
#include <stdexcept>

namespace coocmatch {

int soft_bins_for_divisor(double divisor, double max_value) {
  if (!(divisor >= 1.0))
    throw std::invalid_argument("soft histogram divisor must be >= 1");
  return static_cast<int>(std::ceil(max_value / divisor)) + 1;
}

namespace {

// Per-pixel soft bin assignments for one level, same layout as the image.
std::vector<SoftBin> decompose(const ImageBuffer& image, InterpKernel kernel,
                               double divisor) {
  const double inv = 1.0 / divisor;
  const std::vector<double>& px = image.data();
  std::vector<SoftBin> out(px.size());
  for (std::size_t i = 0; i < px.size(); ++i)
    out[i] = soft_bin(kernel, px[i] * inv);
  return out;
}

inline std::size_t pixel_index(const ImageBuffer& im, int y, int x, int c) {
  return (static_cast<std::size_t>(y) * im.width() + x) * im.channels() + c;
}

// Accumulates the soft outer product of one value pair into mat.
inline void accumulate_pair(double* mat, int bins, const SoftBin& a,
                            const SoftBin& b) {
  const int i0 = a.bin0, j0 = b.bin0;
  const bool i0_ok = i0 >= 0 && i0 < bins, i1_ok = i0 + 1 >= 0 && i0 + 1 < bins;
  const bool j0_ok = j0 >= 0 && j0 < bins, j1_ok = j0 + 1 >= 0 && j0 + 1 < bins;
  if (i0_ok) {
    double* row = mat + static_cast<std::size_t>(i0) * bins;
    if (j0_ok) row[j0] += a.w0 * b.w0;
    if (j1_ok) row[j0 + 1] += a.w0 * b.w1;
  }
  if (i1_ok) {
    double* row = mat + static_cast<std::size_t>(i0 + 1) * bins;
    if (j0_ok) row[j0] += a.w1 * b.w0;
    if (j1_ok) row[j0 + 1] += a.w1 * b.w1;
  }
}

// d(seed . C)/d(left value) and d(seed . C)/d(right value) for one pair.
inline void pair_pullback(const double* seed, int bins, const SoftBin& a,
                          const SoftBin& b, double inv_divisor, double& ga,
                          double& gb) {
  const int i0 = a.bin0, j0 = b.bin0;
  double s00 = 0, s01 = 0, s10 = 0, s11 = 0;
  if (i0 >= 0 && i0 < bins) {
    const double* row = seed + static_cast<std::size_t>(i0) * bins;
    if (j0 >= 0 && j0 < bins) s00 = row[j0];
    if (j0 + 1 >= 0 && j0 + 1 < bins) s01 = row[j0 + 1];
  }
  if (i0 + 1 >= 0 && i0 + 1 < bins) {
    const double* row = seed + static_cast<std::size_t>(i0 + 1) * bins;
    if (j0 >= 0 && j0 < bins) s10 = row[j0];
    if (j0 + 1 >= 0 && j0 + 1 < bins) s11 = row[j0 + 1];
  }
  ga += inv_divisor * (a.d0 * (s00 * b.w0 + s01 * b.w1) +
                       a.d1 * (s10 * b.w0 + s11 * b.w1));
  gb += inv_divisor * (a.w0 * (s00 * b.d0 + s01 * b.d1) +
                       a.w1 * (s10 * b.d0 + s11 * b.d1));
}

void forward_pair_matrix(const ImageBuffer& im, const std::vector<SoftBin>& dec,
                         const PairLabel& label, double* mat, int bins) {
  const int h = im.height(), w = im.width();
  switch (label.geometry.kind) {
    case PairGeometry::Kind::horizontal:
      for (int y = 0; y < h; ++y)
        for (int x = 0; x + 1 < w; ++x)
          accumulate_pair(mat, bins, dec[pixel_index(im, y, x, label.channel_a)],
                          dec[pixel_index(im, y, x + 1, label.channel_b)]);
      break;
    case PairGeometry::Kind::diagonal:
      for (int y = 0; y + 1 < h; ++y)
        for (int x = 0; x + 1 < w; ++x)
          accumulate_pair(mat, bins, dec[pixel_index(im, y, x, label.channel_a)],
                          dec[pixel_index(im, y + 1, x + 1, label.channel_b)]);
      break;
    case PairGeometry::Kind::cross_band:
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          accumulate_pair(mat, bins, dec[pixel_index(im, y, x, label.channel_a)],
                          dec[pixel_index(im, y, x, label.channel_b)]);
      break;
  }
}

void backward_pair_matrix(const ImageBuffer& im, const std::vector<SoftBin>& dec,
                          const PairLabel& label, const double* seed, int bins,
                          double inv_divisor, GradBuffer& grad) {
  const int h = im.height(), w = im.width();
  switch (label.geometry.kind) {
    case PairGeometry::Kind::horizontal:
      for (int y = 0; y < h; ++y)
        for (int x = 0; x + 1 < w; ++x)
          pair_pullback(seed, bins, dec[pixel_index(im, y, x, label.channel_a)],
                        dec[pixel_index(im, y, x + 1, label.channel_b)],
                        inv_divisor, grad.at(y, x, label.channel_a),
                        grad.at(y, x + 1, label.channel_b));
      break;
    case PairGeometry::Kind::diagonal:
      for (int y = 0; y + 1 < h; ++y)
        for (int x = 0; x + 1 < w; ++x)
          pair_pullback(seed, bins, dec[pixel_index(im, y, x, label.channel_a)],
                        dec[pixel_index(im, y + 1, x + 1, label.channel_b)],
                        inv_divisor, grad.at(y, x, label.channel_a),
                        grad.at(y + 1, x + 1, label.channel_b));
      break;
    case PairGeometry::Kind::cross_band:
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          pair_pullback(seed, bins, dec[pixel_index(im, y, x, label.channel_a)],
                        dec[pixel_index(im, y, x, label.channel_b)],
                        inv_divisor, grad.at(y, x, label.channel_a),
                        grad.at(y, x, label.channel_b));
      break;
  }
}

}  // namespace

CoocStack soft_cooc(const ImageBuffer& image, const PairGeometry& geometry,
                    InterpKernel kernel, double divisor) {
  check_geometry(geometry, image.height(), image.width(), image.channels());
  const int bins = soft_bins_for_divisor(divisor);
  CoocStack stack(expand_pairs(geometry, image.channels()), bins);
  auto dec = decompose(image, kernel, divisor);
  for (std::size_t p = 0; p < stack.pair_count(); ++p)
    forward_pair_matrix(image, dec, stack.pairs()[p], stack.mat(p), bins);
  return stack;
}

GradBuffer soft_cooc_grad(const ImageBuffer& image, const PairGeometry& geometry,
                          InterpKernel kernel, double divisor,
                          const CoocStack& seed) {
  check_geometry(geometry, image.height(), image.width(), image.channels());
  const int bins = soft_bins_for_divisor(divisor);
  auto labels = expand_pairs(geometry, image.channels());
  if (seed.bins() != bins || seed.pair_count() != labels.size())
    throw std::invalid_argument("soft_cooc_grad: seed shape mismatch");

  GradBuffer grad(image.height(), image.width(), image.channels());
  auto dec = decompose(image, kernel, divisor);
  for (std::size_t p = 0; p < labels.size(); ++p)
    backward_pair_matrix(image, dec, labels[p], seed.mat(p), bins,
                         1.0 / divisor, grad);
  return grad;
}

PyramidTargets precompute_pyramid_targets(const ImageBuffer& target,
                                          const PyramidSpec& spec,
                                          InterpKernel kernel,
                                          std::vector<PairGeometry> geometries) {
  if (spec.levels < 1)
    throw std::invalid_argument("pyramid needs at least one level");
  if (geometries.empty())
    throw std::invalid_argument("pyramid needs at least one geometry");
  for (const auto& g : geometries)
    check_geometry(g, target.height(), target.width(), target.channels());

  PyramidTargets t;
  t.spec = spec;
  t.kernel = kernel;
  t.geometries = std::move(geometries);
  t.height = target.height();
  t.width = target.width();
  t.channels = target.channels();
  t.normalized.resize(spec.levels);
  for (int n = 0; n < spec.levels; ++n) {
    for (const auto& g : t.geometries) {
      CoocStack stack = soft_cooc(target, g, kernel, PyramidSpec::divisor(n));
      const double count =
          static_cast<double>(pair_count(g, t.height, t.width));
      const std::size_t sz =
          static_cast<std::size_t>(stack.bins()) * stack.bins();
      for (std::size_t p = 0; p < stack.pair_count(); ++p) {
        double* m = stack.mat(p);
        for (std::size_t i = 0; i < sz; ++i) m[i] /= count;
      }
      t.normalized[n].push_back(std::move(stack));
    }
  }
  return t;
}

LossGrad pyramid_loss(const ImageBuffer& a, const PyramidTargets& targets) {
  if (a.height() != targets.height || a.width() != targets.width ||
      a.channels() != targets.channels)
    throw std::invalid_argument("pyramid_loss: image shape does not match targets");

  LossGrad out;
  out.grad = GradBuffer(a.height(), a.width(), a.channels());

  for (int n = 0; n < targets.spec.levels; ++n) {
    const double divisor = PyramidSpec::divisor(n);
    const double weight = PyramidSpec::weight(n);
    const int bins = soft_bins_for_divisor(divisor);
    auto dec = decompose(a, targets.kernel, divisor);

    for (std::size_t gi = 0; gi < targets.geometries.size(); ++gi) {
      const PairGeometry& g = targets.geometries[gi];
      const CoocStack& ref = targets.normalized[n][gi];
      // Divide rather than multiply by a precomputed inverse: the targets
      // were normalized with the same division, so an iterate with identical
      // raw counts yields diff == 0.0 exactly and a zero subgradient.
      const double count =
          static_cast<double>(pair_count(g, a.height(), a.width()));
      const double inv_count = 1.0 / count;

      CoocStack stack(expand_pairs(g, a.channels()), bins);
      const std::size_t sz = static_cast<std::size_t>(bins) * bins;
      for (std::size_t p = 0; p < stack.pair_count(); ++p) {
        double* m = stack.mat(p);
        forward_pair_matrix(a, dec, stack.pairs()[p], m, bins);

        // Turn the matrix into the seed in place: entries become
        // weight * sign(normalized - ref) / count, loss accumulates |diff|.
        const double* r = ref.mat(p);
        const double seed_mag = weight * inv_count;
        for (std::size_t i = 0; i < sz; ++i) {
          double diff = m[i] / count - r[i];
          if (diff > 0.0) {
            out.loss += weight * diff;
            m[i] = seed_mag;
          } else if (diff < 0.0) {
            out.loss -= weight * diff;
            m[i] = -seed_mag;
          } else {
            m[i] = 0.0;
          }
        }
        backward_pair_matrix(a, dec, stack.pairs()[p], m, bins, 1.0 / divisor,
                             out.grad);
      }
    }
  }
  return out;
}

}  // namespace coocmatch
