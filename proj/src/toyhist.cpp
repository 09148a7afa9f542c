#include "coocmatch/toyhist.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace coocmatch {

int toy_pyramid_levels(int grid) {
  if (grid < 2) throw std::invalid_argument("grid must be >= 2");
  // Top divisor 2^n >= grid puts the whole axis span strictly inside one
  // kernel width, so every pair of values exchanges gradient there.
  int n = 0;
  while ((1 << n) < grid) ++n;
  return n + 1;
}

namespace {

int level_bins(int grid, int level) {
  double divisor = static_cast<double>(1 << level);
  return static_cast<int>(std::ceil((grid - 1) / divisor)) + 1;
}

void hist_1d(const std::vector<double>& pts, InterpKernel kernel,
             double divisor, int bins, std::vector<double>& h) {
  h.assign(bins, 0.0);
  for (double p : pts) {
    SoftBin sb = soft_bin(kernel, p / divisor);
    if (sb.bin0 >= 0 && sb.bin0 < bins) h[sb.bin0] += sb.w0;
    if (sb.bin0 + 1 >= 0 && sb.bin0 + 1 < bins) h[sb.bin0 + 1] += sb.w1;
  }
}

void hist_2d(const std::vector<std::array<double, 2>>& pts, InterpKernel kernel,
             double divisor, int bins, std::vector<double>& h) {
  h.assign(static_cast<std::size_t>(bins) * bins, 0.0);
  for (const auto& p : pts) {
    SoftBin sx = soft_bin(kernel, p[0] / divisor);
    SoftBin sy = soft_bin(kernel, p[1] / divisor);
    const bool x0 = sx.bin0 >= 0 && sx.bin0 < bins;
    const bool x1 = sx.bin0 + 1 >= 0 && sx.bin0 + 1 < bins;
    const bool y0 = sy.bin0 >= 0 && sy.bin0 < bins;
    const bool y1 = sy.bin0 + 1 >= 0 && sy.bin0 + 1 < bins;
    if (x0 && y0) h[static_cast<std::size_t>(sx.bin0) * bins + sy.bin0] += sx.w0 * sy.w0;
    if (x0 && y1) h[static_cast<std::size_t>(sx.bin0) * bins + sy.bin0 + 1] += sx.w0 * sy.w1;
    if (x1 && y0) h[static_cast<std::size_t>(sx.bin0 + 1) * bins + sy.bin0] += sx.w1 * sy.w0;
    if (x1 && y1) h[static_cast<std::size_t>(sx.bin0 + 1) * bins + sy.bin0 + 1] += sx.w1 * sy.w1;
  }
}

// seed_i = d(loss)/d(h_i) for the pointwise kinds; diff is h - t.
double pointwise_loss(HistLossKind kind, std::vector<double>& diff) {
  double loss = 0.0;
  for (double& d : diff) {
    if (kind == HistLossKind::l2_pointwise) {
      loss += d * d;
      d = 2.0 * d;
    } else {
      loss += std::fabs(d);
      d = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    }
  }
  return loss;
}

}  // namespace

ToyLossGrad hist_loss_1d(const std::vector<double>& points,
                         const std::vector<double>& target_points,
                         HistLossKind kind, InterpKernel kernel, int grid) {
  ToyLossGrad out;
  out.grad.assign(points.size(), 0.0);
  const int levels =
      kind == HistLossKind::l1_pyramid ? toy_pyramid_levels(grid) : 1;

  std::vector<double> h, t;
  for (int n = 0; n < levels; ++n) {
    const double divisor = static_cast<double>(1 << n);
    const double weight = static_cast<double>(1 << n);
    const int bins = level_bins(grid, n);
    hist_1d(points, kernel, divisor, bins, h);
    hist_1d(target_points, kernel, divisor, bins, t);
    for (int i = 0; i < bins; ++i) h[i] -= t[i];
    double lvl = pointwise_loss(
        kind == HistLossKind::l2_pointwise ? kind : HistLossKind::l1_pointwise,
        h);
    out.loss += weight * lvl;
    for (std::size_t k = 0; k < points.size(); ++k) {
      SoftBin sb = soft_bin(kernel, points[k] / divisor);
      double g = 0.0;
      if (sb.bin0 >= 0 && sb.bin0 < bins) g += h[sb.bin0] * sb.d0;
      if (sb.bin0 + 1 >= 0 && sb.bin0 + 1 < bins) g += h[sb.bin0 + 1] * sb.d1;
      out.grad[k] += weight * g / divisor;
    }
  }
  return out;
}

ToyLossGrad hist_loss_2d(const std::vector<std::array<double, 2>>& points,
                         const std::vector<std::array<double, 2>>& target_points,
                         HistLossKind kind, InterpKernel kernel, int grid) {
  ToyLossGrad out;
  out.grad.assign(points.size() * 2, 0.0);
  const int levels =
      kind == HistLossKind::l1_pyramid ? toy_pyramid_levels(grid) : 1;

  std::vector<double> h, t;
  for (int n = 0; n < levels; ++n) {
    const double divisor = static_cast<double>(1 << n);
    const double weight = static_cast<double>(1 << n);
    const int bins = level_bins(grid, n);
    hist_2d(points, kernel, divisor, bins, h);
    hist_2d(target_points, kernel, divisor, bins, t);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] -= t[i];
    double lvl = pointwise_loss(
        kind == HistLossKind::l2_pointwise ? kind : HistLossKind::l1_pointwise,
        h);
    out.loss += weight * lvl;

    for (std::size_t k = 0; k < points.size(); ++k) {
      SoftBin sx = soft_bin(kernel, points[k][0] / divisor);
      SoftBin sy = soft_bin(kernel, points[k][1] / divisor);
      double gx = 0.0, gy = 0.0;
      for (int a = 0; a < 2; ++a) {
        int i = sx.bin0 + a;
        if (i < 0 || i >= bins) continue;
        double wx = a == 0 ? sx.w0 : sx.w1;
        double dx = a == 0 ? sx.d0 : sx.d1;
        for (int b = 0; b < 2; ++b) {
          int j = sy.bin0 + b;
          if (j < 0 || j >= bins) continue;
          double wy = b == 0 ? sy.w0 : sy.w1;
          double dy = b == 0 ? sy.d0 : sy.d1;
          double s = h[static_cast<std::size_t>(i) * bins + j];
          gx += s * dx * wy;
          gy += s * wx * dy;
        }
      }
      out.grad[2 * k] += weight * gx / divisor;
      out.grad[2 * k + 1] += weight * gy / divisor;
    }
  }
  return out;
}

HistLossKind parse_hist_loss(const std::string& s) {
  if (s == "l1" || s == "l1_pointwise") return HistLossKind::l1_pointwise;
  if (s == "l2" || s == "l2_pointwise") return HistLossKind::l2_pointwise;
  if (s == "l1_pyramid" || s == "pyramid") return HistLossKind::l1_pyramid;
  throw std::invalid_argument("unknown histogram loss: " + s);
}

const char* to_string(HistLossKind k) {
  switch (k) {
    case HistLossKind::l1_pointwise: return "l1_pointwise";
    case HistLossKind::l2_pointwise: return "l2_pointwise";
    case HistLossKind::l1_pyramid: return "l1_pyramid";
  }
  return "?";
}

}  // namespace coocmatch
