#include "coocmatch/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "coocmatch/optimizer.hpp"
#include "coocmatch/pairing.hpp"
#include "coocmatch/rng.hpp"
#include "coocmatch/softhist.hpp"

namespace coocmatch {

KernelFn library_kernel(InterpKernel k) {
  return [k](double x) { return kernel_eval(k, x); };
}

namespace {

void reference_accumulate(CoocStack& stack, std::size_t p, const KernelFn& kernel,
                          double sa, double sb) {
  const int bins = stack.bins();
  const int ia = static_cast<int>(std::floor(sa));
  const int ib = static_cast<int>(std::floor(sb));
  for (int i = ia - 1; i <= ia + 1; ++i) {
    if (i < 0 || i >= bins) continue;
    double fa = kernel(sa - i).value;
    if (fa == 0.0) continue;
    for (int j = ib - 1; j <= ib + 1; ++j) {
      if (j < 0 || j >= bins) continue;
      stack.at(p, i, j) += fa * kernel(sb - j).value;
    }
  }
}

ImageBuffer random_integer_image(Rng& rng, int h, int w, int c) {
  ImageBuffer img(h, w, c, PixelMode::integer);
  for (double& v : img.data())
    v = static_cast<double>(rng.uniform_int(0, 255));
  return img;
}

ImageBuffer random_real_image(Rng& rng, int h, int w, int c) {
  ImageBuffer img(h, w, c, PixelMode::real);
  for (double& v : img.data()) v = rng.uniform(0.0, 255.0);
  return img;
}

// A pixel value whose scaled copies v/2^n all sit at least `margin` away
// from every integer (where the triangle kernel has kinks), for n = 0..8.
double kink_free_value(Rng& rng, double margin) {
  for (;;) {
    double v = static_cast<double>(rng.uniform_int(0, 254)) +
               rng.uniform(0.15, 0.85);
    bool ok = true;
    for (int n = 0; n <= 8 && ok; ++n) {
      double s = v / static_cast<double>(1 << n);
      if (std::fabs(s - std::nearbyint(s)) < margin) ok = false;
    }
    if (ok) return v;
  }
}

double max_abs_stack_diff(const CoocStack& a, const CoocStack& b) {
  if (!a.same_shape(b))
    throw std::invalid_argument("stack shape mismatch in comparison");
  double worst = 0.0;
  for (std::size_t p = 0; p < a.pair_count(); ++p)
    for (int i = 0; i < a.bins(); ++i)
      for (int j = 0; j < a.bins(); ++j)
        worst = std::max(worst, std::fabs(a.at(p, i, j) - b.at(p, i, j)));
  return worst;
}

std::string format_metric(double x) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific << x;
  return out.str();
}

}  // namespace

CoocStack soft_cooc_reference(const ImageBuffer& image,
                              const PairGeometry& geometry,
                              const KernelFn& kernel, double divisor) {
  check_geometry(geometry, image.height(), image.width(), image.channels());
  const int bins = soft_bins_for_divisor(divisor);
  CoocStack stack(expand_pairs(geometry, image.channels()), bins);
  const double inv = 1.0 / divisor;
  const int h = image.height(), w = image.width();

  switch (geometry.kind) {
    case PairGeometry::Kind::horizontal:
      for (std::size_t p = 0; p < stack.pair_count(); ++p) {
        int c = stack.pairs()[p].channel_a;
        for (int y = 0; y < h; ++y)
          for (int x = 0; x + 1 < w; ++x)
            reference_accumulate(stack, p, kernel, image.at(y, x, c) * inv,
                                 image.at(y, x + 1, c) * inv);
      }
      break;
    case PairGeometry::Kind::diagonal:
      for (std::size_t p = 0; p < stack.pair_count(); ++p) {
        int c = stack.pairs()[p].channel_a;
        for (int y = 0; y + 1 < h; ++y)
          for (int x = 0; x + 1 < w; ++x)
            reference_accumulate(stack, p, kernel, image.at(y, x, c) * inv,
                                 image.at(y + 1, x + 1, c) * inv);
      }
      break;
    case PairGeometry::Kind::cross_band:
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          reference_accumulate(stack, 0, kernel,
                               image.at(y, x, geometry.band_a) * inv,
                               image.at(y, x, geometry.band_b) * inv);
      break;
  }
  return stack;
}

std::vector<double> finite_difference(
    const ImageBuffer& x, const std::function<double(const ImageBuffer&)>& f,
    double h) {
  std::vector<double> grad(x.size());
  ImageBuffer probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x.data()[i];
    probe.data()[i] = v + h;
    double up = f(probe);
    probe.data()[i] = v - h;
    double down = f(probe);
    probe.data()[i] = v;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

double max_rel_err(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("max_rel_err: length mismatch");
  double scale = 1e-12;
  for (double v : a) scale = std::max(scale, std::fabs(v));
  for (double v : b) scale = std::max(scale, std::fabs(v));
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::fabs(a[i] - b[i]));
  return worst / scale;
}

double emd1d_bruteforce(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("emd1d_bruteforce: length mismatch");
  std::size_t i = 0, j = 0;
  double cost = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= 0.0) {
      ++i;
      continue;
    }
    if (b[j] <= 0.0) {
      ++j;
      continue;
    }
    double m = std::min(a[i], b[j]);
    cost += m * std::fabs(static_cast<double>(i) - static_cast<double>(j));
    a[i] -= m;
    b[j] -= m;
  }
  return cost;
}

SuiteResult verify_integer_equivalence(std::uint64_t seed, int images,
                                       const KernelFn& kernel_override) {
  Rng rng(seed);
  double worst = 0.0;
  int comparisons = 0;
  for (int n = 0; n < images; ++n) {
    int h = rng.uniform_int(4, 64);
    int w = rng.uniform_int(4, 64);
    int c = (n % 2 == 0) ? 1 : 3;
    ImageBuffer img = random_integer_image(rng, h, w, c);

    std::vector<PairGeometry> geoms = {PairGeometry::horizontal(),
                                       PairGeometry::diagonal()};
    if (c == 3) {
      int a = rng.uniform_int(0, 2);
      int b = (a + 1 + rng.uniform_int(0, 1)) % 3;
      geoms.push_back(PairGeometry::cross_band(a, b));
    }

    for (const auto& g : geoms)
      for (InterpKernel k : {InterpKernel::triangle, InterpKernel::raised_cosine}) {
        CoocStack discrete = cooc_discrete(img, g);
        CoocStack soft = soft_cooc(img, g, k, 1.0);
        KernelFn fn = kernel_override ? kernel_override : library_kernel(k);
        CoocStack ref = soft_cooc_reference(img, g, fn, 1.0);
        worst = std::max(worst, max_abs_stack_diff(discrete, soft));
        worst = std::max(worst, max_abs_stack_diff(discrete, ref));
        ++comparisons;
      }
  }
  SuiteResult r;
  r.name = "integer_equivalence";
  r.metric = worst;
  r.passed = (worst == 0.0);
  r.detail = std::to_string(images) + " images, " +
             std::to_string(comparisons) + " comparisons, max abs diff " +
             format_metric(worst);
  return r;
}

SuiteResult verify_mass_conservation(std::uint64_t seed, int images) {
  Rng rng(seed);
  double worst = 0.0;
  for (int n = 0; n < images; ++n) {
    int h = rng.uniform_int(4, 32);
    int w = rng.uniform_int(4, 32);
    int c = (n % 2 == 0) ? 1 : 3;
    ImageBuffer img = random_real_image(rng, h, w, c);

    double divisor;
    switch (n % 3) {
      case 0: divisor = 1.0; break;
      case 1: divisor = static_cast<double>(1 << rng.uniform_int(1, 8)); break;
      default: divisor = rng.uniform(1.0, 64.0); break;
    }
    InterpKernel k = (n % 2 == 0) ? InterpKernel::raised_cosine
                                  : InterpKernel::triangle;

    std::vector<PairGeometry> geoms = {PairGeometry::horizontal(),
                                       PairGeometry::diagonal()};
    if (c == 3) geoms.push_back(PairGeometry::cross_band(0, 1));

    for (const auto& g : geoms) {
      CoocStack stack = soft_cooc(img, g, k, divisor);
      double expected = static_cast<double>(pair_count(g, h, w));
      for (std::size_t p = 0; p < stack.pair_count(); ++p) {
        double rel = std::fabs(stack.mass(p) - expected) / expected;
        worst = std::max(worst, rel);
      }
    }
  }
  SuiteResult r;
  r.name = "mass_conservation";
  r.metric = worst;
  r.passed = (worst < 1e-9);
  r.detail = std::to_string(images) + " images, max rel deviation " +
             format_metric(worst);
  return r;
}

SuiteResult verify_gradients(std::uint64_t seed, int instances) {
  Rng rng(seed);
  const double margin = 2e-3;
  double worst = 0.0;

  for (int n = 0; n < instances; ++n) {
    const int c = (n % 2 == 0) ? 1 : 3;
    const InterpKernel k =
        (n % 2 == 0) ? InterpKernel::triangle : InterpKernel::raised_cosine;
    ImageBuffer x(8, 8, c, PixelMode::real);
    for (double& v : x.data()) v = kink_free_value(rng, margin);

    std::vector<PairGeometry> geoms = {PairGeometry::horizontal(),
                                       PairGeometry::diagonal()};
    if (c == 3) geoms.push_back(PairGeometry::cross_band(0, 1));

    // seed-weighted soft count, one geometry at a random divisor
    {
      const PairGeometry g = geoms[rng.uniform_int(0, static_cast<int>(geoms.size()) - 1)];
      double divisor = (n % 3 == 0) ? 1.0 : rng.uniform(1.5, 8.0);
      CoocStack probe = soft_cooc(x, g, k, divisor);
      CoocStack weight(probe.pairs(), probe.bins());
      for (std::size_t p = 0; p < weight.pair_count(); ++p)
        for (int i = 0; i < weight.bins(); ++i)
          for (int j = 0; j < weight.bins(); ++j)
            weight.at(p, i, j) = rng.uniform(-1.0, 1.0);

      GradBuffer g_an = soft_cooc_grad(x, g, k, divisor, weight);
      auto functional = [&](const ImageBuffer& img) {
        CoocStack s = soft_cooc(img, g, k, divisor);
        double acc = 0.0;
        for (std::size_t p = 0; p < s.pair_count(); ++p)
          for (int i = 0; i < s.bins(); ++i)
            for (int j = 0; j < s.bins(); ++j)
              acc += weight.at(p, i, j) * s.at(p, i, j);
        return acc;
      };
      worst = std::max(worst,
                       max_rel_err(g_an.data, finite_difference(x, functional)));
    }

    // pyramid loss and the full objective at several image weights
    ImageBuffer target = random_integer_image(rng, 8, 8, c);
    ImageBuffer source = random_integer_image(rng, 8, 8, c);
    for (double lambda : {0.0, 3.0, 10.0}) {
      AttackConfig cfg;
      cfg.lambda = lambda;
      cfg.kernel = k;
      cfg.geometries = geoms;
      PyramidTargets targets =
          precompute_pyramid_targets(target, cfg.pyramid, k, geoms);

      LossGrad lg = total_loss(x, targets, source, cfg);
      auto functional = [&](const ImageBuffer& img) {
        return total_loss(img, targets, source, cfg).loss;
      };
      worst = std::max(worst,
                       max_rel_err(lg.grad.data, finite_difference(x, functional)));
    }
  }

  SuiteResult r;
  r.name = "gradient_check";
  r.metric = worst;
  r.passed = (worst < 1e-4);
  r.detail = std::to_string(instances) + " instances, max rel err " +
             format_metric(worst);
  return r;
}

SuiteResult verify_emd_oracle(std::uint64_t seed, int instances) {
  Rng rng(seed);
  double worst = 0.0;
  for (int n = 0; n < instances; ++n) {
    int bins = rng.uniform_int(2, 8);
    int total = rng.uniform_int(1, 40);
    std::vector<double> a(bins, 0.0), b(bins, 0.0);
    for (int t = 0; t < total; ++t) a[rng.uniform_int(0, bins - 1)] += 1.0;
    for (int t = 0; t < total; ++t) b[rng.uniform_int(0, bins - 1)] += 1.0;
    worst = std::max(worst, std::fabs(emd1d(a, b) - emd1d_bruteforce(a, b)));
  }
  SuiteResult r;
  r.name = "emd_oracle";
  r.metric = worst;
  r.passed = (worst == 0.0);
  r.detail = std::to_string(instances) + " instances, max abs diff " +
             format_metric(worst);
  return r;
}

std::vector<SuiteResult> verify_all(std::uint64_t seed) {
  return {verify_integer_equivalence(seed), verify_mass_conservation(seed + 1),
          verify_gradients(seed + 2), verify_emd_oracle(seed + 3)};
}

}  // namespace coocmatch
