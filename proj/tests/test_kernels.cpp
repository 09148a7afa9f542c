#include <cmath>

#include <doctest.h>

#include "coocmatch/kernels.hpp"
#include "coocmatch/rng.hpp"

using namespace coocmatch;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("kernels agree with the delta on integers") {
  for (auto k : {InterpKernel::triangle, InterpKernel::raised_cosine}) {
    CHECK(kernel_eval(k, 0.0).value == doctest::Approx(1.0).epsilon(1e-15));
    for (int i = -4; i <= 4; ++i) {
      if (i == 0) continue;
      CHECK(kernel_eval(k, static_cast<double>(i)).value ==
            doctest::Approx(0.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("kernels vanish outside (-1, 1)") {
  Rng rng(7);
  for (auto k : {InterpKernel::triangle, InterpKernel::raised_cosine}) {
    for (int i = 0; i < 200; ++i) {
      double x = rng.uniform(1.0, 50.0);
      if (rng.uniform() < 0.5) x = -x;
      KernelEval e = kernel_eval(k, x);
      CHECK(e.value == 0.0);
      CHECK(e.derivative == 0.0);
    }
  }
}

TEST_CASE("partition of unity on [0, 1]") {
  Rng rng(11);
  for (auto k : {InterpKernel::triangle, InterpKernel::raised_cosine}) {
    for (int i = 0; i < 500; ++i) {
      double t = rng.uniform();
      double s = kernel_eval(k, t).value + kernel_eval(k, t - 1.0).value;
      CHECK(std::fabs(s - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("kernels decrease away from zero") {
  for (auto k : {InterpKernel::triangle, InterpKernel::raised_cosine}) {
    double prev = kernel_eval(k, 0.0).value;
    for (int i = 1; i <= 20; ++i) {
      double v = kernel_eval(k, i / 20.0).value;
      CHECK(v <= prev + 1e-15);
      prev = v;
    }
  }
}

TEST_CASE("triangle values and kink derivatives") {
  CHECK(kernel_eval(InterpKernel::triangle, 0.25).value == doctest::Approx(0.75));
  CHECK(kernel_eval(InterpKernel::triangle, -0.5).value == doctest::Approx(0.5));
  CHECK(kernel_eval(InterpKernel::triangle, 0.3).derivative ==
        doctest::Approx(-1.0));
  CHECK(kernel_eval(InterpKernel::triangle, -0.3).derivative ==
        doctest::Approx(1.0));
  // kinks report the average of the one-sided slopes
  CHECK(kernel_eval(InterpKernel::triangle, 0.0).derivative == doctest::Approx(0.0));
  CHECK(kernel_eval(InterpKernel::triangle, 1.0).derivative ==
        doctest::Approx(-0.5));
  CHECK(kernel_eval(InterpKernel::triangle, -1.0).derivative ==
        doctest::Approx(0.5));
}

TEST_CASE("raised cosine values and derivatives") {
  CHECK(kernel_eval(InterpKernel::raised_cosine, 0.5).value ==
        doctest::Approx(0.5));
  CHECK(kernel_eval(InterpKernel::raised_cosine, 0.5).derivative ==
        doctest::Approx(-kPi / 2.0));
  // C1 at the support edges and at the peak
  CHECK(kernel_eval(InterpKernel::raised_cosine, 0.0).derivative ==
        doctest::Approx(0.0));
  CHECK(kernel_eval(InterpKernel::raised_cosine, 1.0).derivative ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(kernel_eval(InterpKernel::raised_cosine, -1.0).derivative ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("raised cosine derivative matches finite differences") {
  Rng rng(13);
  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    double x = rng.uniform(-0.99, 0.99);
    auto f = [](double t) {
      return kernel_eval(InterpKernel::raised_cosine, t).value;
    };
    double fd = (f(x + h) - f(x - h)) / (2.0 * h);
    CHECK(kernel_eval(InterpKernel::raised_cosine, x).derivative ==
          doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("soft_bin matches kernel_eval on both touched bins") {
  Rng rng(17);
  for (auto k : {InterpKernel::triangle, InterpKernel::raised_cosine}) {
    for (int i = 0; i < 200; ++i) {
      double v = rng.uniform(0.0, 255.0);
      SoftBin sb = soft_bin(k, v);
      double t = v - sb.bin0;
      CHECK(sb.bin0 == static_cast<int>(std::floor(v)));
      CHECK(sb.w0 == doctest::Approx(kernel_eval(k, t).value).epsilon(1e-14));
      CHECK(sb.w1 ==
            doctest::Approx(kernel_eval(k, t - 1.0).value).epsilon(1e-14));
      CHECK(sb.d0 ==
            doctest::Approx(kernel_eval(k, t).derivative).epsilon(1e-14));
      CHECK(sb.d1 ==
            doctest::Approx(kernel_eval(k, t - 1.0).derivative).epsilon(1e-14));
      CHECK(std::fabs(sb.w0 + sb.w1 - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("kernel names round-trip") {
  CHECK(parse_kernel("triangle") == InterpKernel::triangle);
  CHECK(parse_kernel("raised_cosine") == InterpKernel::raised_cosine);
  CHECK(parse_kernel(to_string(InterpKernel::triangle)) ==
        InterpKernel::triangle);
  CHECK(parse_kernel(to_string(InterpKernel::raised_cosine)) ==
        InterpKernel::raised_cosine);
  CHECK_THROWS(parse_kernel("gaussian"));
}
