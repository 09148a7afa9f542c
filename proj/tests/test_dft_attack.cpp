#include <cmath>
#include <vector>

#include <doctest.h>

#include "coocmatch/dft_attack.hpp"
#include "coocmatch/rng.hpp"
#include "coocmatch/verify.hpp"

using namespace coocmatch;

namespace {

ImageBuffer random_int_image(Rng& rng, int h, int w, int c) {
  ImageBuffer img(h, w, c, PixelMode::integer);
  for (double& v : img.data()) v = rng.uniform_int(0, 255);
  return img;
}

// spatial form of the residual filter, circular convolution
double filter_term(const ImageBuffer& x, const ImageBuffer& r) {
  static const double taps[3][3] = {{0.25, -0.5, 0.25},
                                    {-0.5, 1.0, -0.5},
                                    {0.25, -0.5, 0.25}};
  const int h = x.height(), w = x.width(), ch = x.channels();
  double acc = 0.0;
  for (int c = 0; c < ch; ++c)
    for (int y = 0; y < h; ++y)
      for (int xx = 0; xx < w; ++xx) {
        double conv = 0.0;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            int yy = (y + dy + h) % h, xc = (xx + dx + w) % w;
            conv += taps[dy + 1][dx + 1] * (x.at(yy, xc, c) - r.at(yy, xc, c));
          }
        acc += conv * conv;
      }
  return acc;
}

double objective(const ImageBuffer& x, const ImageBuffer& g,
                 const ImageBuffer& r, double lambda) {
  double close = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = x.data()[i] - g.data()[i];
    close += d * d;
  }
  return filter_term(x, r) + lambda * lambda * close;
}

}  // namespace

TEST_CASE("filter response is zero at DC and non-negative everywhere") {
  FreqWeights w = kirchner_response(8, 12);
  CHECK(w.response[0] == doctest::Approx(0.0).epsilon(1e-12));
  for (double v : w.response) CHECK(v >= -1e-12);
}

TEST_CASE("3x3 response reproduces the defining spectrum") {
  FreqWeights w = kirchner_response(3, 3);
  // the weights square the plain transform of the taps, which is grid-size
  // times the unitary spectrum: |3 * 3/4|^2 = 5.0625 at the four corner
  // frequencies, 0 on the DC axes; closed form ((1-cos a)(1-cos b))^2
  auto at = [&](int u, int v) { return w.response[u * 3 + v]; };
  CHECK(at(0, 0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(at(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(at(1, 0) == doctest::Approx(0.0).epsilon(1e-12));
  for (int u : {1, 2})
    for (int v : {1, 2}) CHECK(at(u, v) == doctest::Approx(5.0625));
}

TEST_CASE("response rejects degenerate grids") {
  CHECK_THROWS(kirchner_response(2, 8));
  CHECK_THROWS(kirchner_response(8, 2));
}

TEST_CASE("huge lambda returns the source") {
  Rng rng(113);
  ImageBuffer g = random_int_image(rng, 8, 8, 3);
  ImageBuffer r = random_int_image(rng, 8, 8, 3);
  ImageBuffer blend = dft_attack_blend(g, r, 1e6);
  double dev = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    dev = std::max(dev, std::fabs(blend.data()[i] - g.data()[i]));
  CHECK(dev < 0.5);
  ImageBuffer rounded = dft_attack(g, r, 1e6);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(rounded.data()[i] == g.data()[i]);
}

TEST_CASE("matching source and target is a fixed point") {
  Rng rng(127);
  ImageBuffer g = random_int_image(rng, 8, 8, 1);
  for (double lambda : {0.003, 0.01, 1.0}) {
    ImageBuffer blend = dft_attack_blend(g, g, lambda);
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(blend.data()[i] == doctest::Approx(g.data()[i]).epsilon(1e-9));
  }
}

TEST_CASE("solution is stationary for the weighted objective") {
  Rng rng(131);
  ImageBuffer g = random_int_image(rng, 8, 8, 1);
  ImageBuffer r = random_int_image(rng, 8, 8, 1);
  const double lambda = 0.01;
  ImageBuffer a = dft_attack_blend(g, r, lambda);

  auto f = [&](const ImageBuffer& x) { return objective(x, g, r, lambda); };
  std::vector<double> grad_at_solution = finite_difference(a, f, 1e-3);
  std::vector<double> grad_at_source = finite_difference(g.to_real(), f, 1e-3);
  double sol = 0.0, src = 0.0;
  for (double v : grad_at_solution) sol = std::max(sol, std::fabs(v));
  for (double v : grad_at_source) src = std::max(src, std::fabs(v));
  CHECK(sol < 1e-6 * src);
}

TEST_CASE("solution beats both endpoints and tracks lambda monotonically") {
  Rng rng(137);
  for (int trial = 0; trial < 3; ++trial) {
    ImageBuffer g = random_int_image(rng, 8, 8, 1);
    ImageBuffer r = random_int_image(rng, 8, 8, 1);
    double prev_dist = -1.0;
    for (double lambda : {0.003, 0.01, 0.03}) {
      ImageBuffer a = dft_attack_blend(g, r, lambda);
      double ja = objective(a, g, r, lambda);
      CHECK(ja <= objective(g.to_real(), g, r, lambda) + 1e-9);
      CHECK(ja <= objective(r.to_real(), g, r, lambda) + 1e-9);
      double dist = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        double d = a.data()[i] - g.data()[i];
        dist += d * d;
      }
      if (prev_dist >= 0.0) CHECK(dist <= prev_dist + 1e-9);
      prev_dist = dist;
    }
  }
}

TEST_CASE("inverse transform comes back real") {
  Rng rng(139);
  ImageBuffer g = random_int_image(rng, 16, 16, 3);
  ImageBuffer r = random_int_image(rng, 16, 16, 3);
  dft_attack_blend(g, r, 0.01);
  CHECK(dft_attack_imag_residue() < 1e-8);
}

TEST_CASE("shape and lambda preconditions") {
  ImageBuffer a(8, 8, 1, PixelMode::integer);
  ImageBuffer b(8, 9, 1, PixelMode::integer);
  CHECK_THROWS(dft_attack(a, b, 0.01));
  ImageBuffer c(8, 8, 1, PixelMode::integer);
  CHECK_THROWS(dft_attack(a, c, 0.0));
  CHECK_THROWS(dft_attack(a, c, -1.0));
}

TEST_CASE("rounded output is a valid byte image") {
  Rng rng(149);
  ImageBuffer g = random_int_image(rng, 8, 8, 1);
  ImageBuffer r = random_int_image(rng, 8, 8, 1);
  ImageBuffer out = dft_attack(g, r, 0.003);
  CHECK(out.mode() == PixelMode::integer);
  CHECK_NOTHROW(out.validate());
}
