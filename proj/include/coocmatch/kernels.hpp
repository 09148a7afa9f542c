#pragma once

#include <string>

namespace coocmatch {

// Interpolation kernels replacing the Kronecker delta in soft counting.
// Both agree with the delta on integers, satisfy f(x) + f(x-1) = 1 on [0,1],
// decrease monotonically away from 0, and vanish outside (-1,1), so a value
// spreads over at most the two bins floor(v) and floor(v)+1.
enum class InterpKernel { triangle, raised_cosine };

struct KernelEval {
  double value = 0.0;
  double derivative = 0.0;
};

// Value and derivative at x. The triangle kernel is not differentiable at
// x = -1, 0, 1; there the average of the one-sided slopes is returned
// (+0.5, 0, -0.5). The raised cosine is C1 everywhere.
KernelEval kernel_eval(InterpKernel k, double x);

// Soft bin assignment of one scalar v >= 0: weights and derivatives of the
// two bins it can touch. Matches kernel_eval at offsets t and t-1.
struct SoftBin {
  int bin0 = 0;       // floor(v)
  double w0 = 0.0;    // kernel value at v - bin0
  double w1 = 0.0;    // kernel value at v - bin0 - 1
  double d0 = 0.0;    // derivative of w0 wrt v
  double d1 = 0.0;    // derivative of w1 wrt v
};
SoftBin soft_bin(InterpKernel k, double v);

const char* to_string(InterpKernel k);
InterpKernel parse_kernel(const std::string& s);

}  // namespace coocmatch
