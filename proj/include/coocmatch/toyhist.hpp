#pragma once

#include <array>
#include <string>
#include <vector>

#include "coocmatch/kernels.hpp"

namespace coocmatch {

// Loss families over soft histograms of free-moving points.
//   l1_pointwise: sum |h_i - t_i| at full resolution
//   l2_pointwise: sum (h_i - t_i)^2 at full resolution
//   l1_pyramid:   sum_n 2^n * L1 between level-n histograms (values / 2^n)
enum class HistLossKind { l1_pointwise, l2_pointwise, l1_pyramid };

struct ToyLossGrad {
  double loss = 0.0;
  std::vector<double> grad;  // one entry per coordinate
};

// Levels until the axis span [0, grid-1] collapses to a single bin:
// 4 for grid 8, 9 for grid 256.
int toy_pyramid_levels(int grid);

// Histograms are raw kernel-weight sums (no mass normalization); bins run
// over 0..grid-1 at full resolution. grad[k] is d(loss)/d(points[k]).
ToyLossGrad hist_loss_1d(const std::vector<double>& points,
                         const std::vector<double>& target_points,
                         HistLossKind kind, InterpKernel kernel, int grid = 8);

// 2D product-kernel histogram over [0,grid-1]^2; grad interleaves x,y per
// point.
ToyLossGrad hist_loss_2d(const std::vector<std::array<double, 2>>& points,
                         const std::vector<std::array<double, 2>>& target_points,
                         HistLossKind kind, InterpKernel kernel, int grid = 8);

HistLossKind parse_hist_loss(const std::string& s);
const char* to_string(HistLossKind k);

}  // namespace coocmatch
