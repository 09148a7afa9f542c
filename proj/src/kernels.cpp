#include "coocmatch/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace coocmatch {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = 1.57079632679489661923;
}  // namespace

KernelEval kernel_eval(InterpKernel k, double x) {
  double ax = std::fabs(x);
  if (k == InterpKernel::triangle) {
    if (ax > 1.0) return {0.0, 0.0};
    if (x == 0.0) return {1.0, 0.0};          // averaged one-sided slopes
    if (x == 1.0) return {0.0, -0.5};
    if (x == -1.0) return {0.0, 0.5};
    return {1.0 - ax, x > 0.0 ? -1.0 : 1.0};
  }
  // raised cosine
  if (ax >= 1.0) return {0.0, 0.0};
  return {0.5 * (1.0 + std::cos(kPi * x)), -kHalfPi * std::sin(kPi * x)};
}

SoftBin soft_bin(InterpKernel k, double v) {
  SoftBin sb;
  double fl = std::floor(v);
  sb.bin0 = static_cast<int>(fl);
  double t = v - fl;  // [0, 1)
  if (k == InterpKernel::triangle) {
    sb.w0 = 1.0 - t;
    sb.w1 = t;
    if (t == 0.0) {
      sb.d0 = 0.0;   // tri'(0) averaged
      sb.d1 = 0.5;   // tri'(-1) averaged
    } else {
      sb.d0 = -1.0;
      sb.d1 = 1.0;
    }
    return sb;
  }
  double c = std::cos(kPi * t);
  double s = std::sin(kPi * t);
  sb.w0 = 0.5 * (1.0 + c);
  sb.w1 = 0.5 * (1.0 - c);
  sb.d0 = -kHalfPi * s;
  sb.d1 = kHalfPi * s;
  return sb;
}

const char* to_string(InterpKernel k) {
  return k == InterpKernel::triangle ? "triangle" : "raised_cosine";
}

InterpKernel parse_kernel(const std::string& s) {
  if (s == "triangle") return InterpKernel::triangle;
  if (s == "raised_cosine") return InterpKernel::raised_cosine;
  throw std::invalid_argument("unknown kernel: " + s);
}

}  // namespace coocmatch
