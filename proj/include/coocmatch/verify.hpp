#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "coocmatch/cooc.hpp"
#include "coocmatch/geometry.hpp"
#include "coocmatch/image.hpp"
#include "coocmatch/kernels.hpp"

namespace coocmatch {

// Self-check suites runnable from the CLI. Each suite compares a library
// path against an independent reference implementation.

struct SuiteResult {
  std::string name;
  bool passed = false;
  double metric = 0.0;  // worst error the suite observed
  std::string detail;
};

// Injectable kernel so tests can corrupt it as a negative control.
using KernelFn = std::function<KernelEval(double)>;

KernelFn library_kernel(InterpKernel k);

// Independent accumulation path: enumerates pairs with plain loops and
// evaluates the kernel directly at every candidate bin, bypassing the
// soft-bin decomposition the library uses.
CoocStack soft_cooc_reference(const ImageBuffer& image,
                              const PairGeometry& geometry,
                              const KernelFn& kernel, double divisor = 1.0);

// Central finite differences of a scalar functional over every pixel.
std::vector<double> finite_difference(
    const ImageBuffer& x, const std::function<double(const ImageBuffer&)>& f,
    double h = 1e-4);

// max_i |a_i - b_i|, relative to the largest magnitude either vector
// attains (element-wise ratios blow up on near-zero entries).
double max_rel_err(const std::vector<double>& a, const std::vector<double>& b);

// Exact 1D transport cost via greedy two-pointer matching, optimal for the
// |i - j| ground cost. Reference for emd1d; exact for integer masses.
double emd1d_bruteforce(std::vector<double> a, std::vector<double> b);

// Soft counting at divisor 1 must reproduce discrete counting exactly on
// integer images. kernel_override swaps the kernel inside the reference
// path only (negative-control hook; corrupting it must fail the suite).
SuiteResult verify_integer_equivalence(std::uint64_t seed, int images = 200,
                                       const KernelFn& kernel_override = {});

// Soft histogram mass must equal the geometric pair count for real-valued
// in-range images, any divisor.
SuiteResult verify_mass_conservation(std::uint64_t seed, int images = 200);

// Analytic gradients of soft counting, the pyramid loss, and the full
// attack objective against central finite differences.
SuiteResult verify_gradients(std::uint64_t seed, int instances = 20);

// emd1d against the greedy transport reference on small integer-mass
// vectors, exact equality.
SuiteResult verify_emd_oracle(std::uint64_t seed, int instances = 100);

std::vector<SuiteResult> verify_all(std::uint64_t seed);

}  // namespace coocmatch
