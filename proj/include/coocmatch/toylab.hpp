#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "coocmatch/toyhist.hpp"

namespace coocmatch {

struct ToyConfig {
  double lr = 0.01;
  double momentum = 0.9;
  int max_steps = 2000;
  int grid = 8;
  InterpKernel kernel = InterpKernel::raised_cosine;
  std::uint64_t seed = 0;
};

struct ToyRun {
  std::vector<std::vector<double>> trajectory;  // flattened coords per step
  std::vector<double> loss;                     // loss at each recorded state
  bool success = false;
  int steps_to_converge = -1;  // updates applied before the rounded match
};

// Momentum descent of the chosen histogram loss over free point
// coordinates, clamped to [0, grid-1]. Noise with the given sigma perturbs
// the gradient evaluation point each step. Success means the rounded points
// form exactly the target's integer histogram; checked before the first
// update and after each one, stopping early on a match.
ToyRun run_toy_1d(std::vector<double> source, const std::vector<double>& target,
                  HistLossKind kind, double noise_sigma, const ToyConfig& cfg);

ToyRun run_toy_2d(std::vector<std::array<double, 2>> source,
                  const std::vector<std::array<double, 2>>& target,
                  HistLossKind kind, double noise_sigma, const ToyConfig& cfg);

struct TrialReport {
  int trials = 0;
  int successes = 0;
  double median_steps = -1.0;  // over successful trials, -1 when none
};

// Random census: each trial draws `points` source and target points
// uniformly from the integer grid and runs the 2D descent. Per-trial seeds
// derive from seed + trial index; trials run in parallel.
TrialReport run_toy_2d_census(int trials, int points, int grid,
                              HistLossKind kind, double noise_sigma,
                              const ToyConfig& cfg, int jobs = 0);

}  // namespace coocmatch
