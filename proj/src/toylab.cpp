#include "coocmatch/toylab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coocmatch/parallel.hpp"
#include "coocmatch/rng.hpp"

namespace coocmatch {

namespace {

// Exact integer census of rounded coordinates; ties round to even.
std::vector<int> rounded_census_1d(const std::vector<double>& pts, int grid) {
  std::vector<int> h(grid, 0);
  for (double p : pts) {
    int i = static_cast<int>(std::nearbyint(p));
    i = std::clamp(i, 0, grid - 1);
    ++h[i];
  }
  return h;
}

std::vector<int> rounded_census_2d(const std::vector<std::array<double, 2>>& pts,
                                   int grid) {
  std::vector<int> h(static_cast<std::size_t>(grid) * grid, 0);
  for (const auto& p : pts) {
    int i = std::clamp(static_cast<int>(std::nearbyint(p[0])), 0, grid - 1);
    int j = std::clamp(static_cast<int>(std::nearbyint(p[1])), 0, grid - 1);
    ++h[static_cast<std::size_t>(i) * grid + j];
  }
  return h;
}

void check_range(const double* vals, std::size_t n, int grid) {
  for (std::size_t i = 0; i < n; ++i)
    if (!(vals[i] >= 0.0 && vals[i] <= grid - 1))
      throw std::invalid_argument("toy point outside the grid");
}

// Shared descent loop over a flat coordinate vector.
template <typename LossFn, typename CensusFn>
ToyRun descend(std::vector<double> coords, const LossFn& loss_at,
               const CensusFn& census_matches, double noise_sigma,
               const ToyConfig& cfg) {
  if (!(cfg.lr > 0.0) || !(cfg.momentum >= 0.0 && cfg.momentum < 1.0) ||
      cfg.max_steps < 0 || cfg.grid < 2)
    throw std::invalid_argument("bad toy config");

  Rng rng(cfg.seed);
  const double hi = static_cast<double>(cfg.grid - 1);
  std::vector<double> velocity(coords.size(), 0.0);
  std::vector<double> eval(coords.size());

  ToyRun run;
  run.trajectory.push_back(coords);
  {
    ToyLossGrad lg = loss_at(coords);
    run.loss.push_back(lg.loss);
  }
  if (census_matches(coords)) {
    run.success = true;
    run.steps_to_converge = 0;
    return run;
  }

  for (int step = 0; step < cfg.max_steps; ++step) {
    if (noise_sigma > 0.0) {
      for (std::size_t i = 0; i < coords.size(); ++i)
        eval[i] = coords[i] + rng.gaussian(noise_sigma);
    } else {
      eval = coords;
    }
    ToyLossGrad lg = loss_at(eval);
    if (!std::isfinite(lg.loss))
      throw std::runtime_error("toy descent: non-finite loss");

    for (std::size_t i = 0; i < coords.size(); ++i) {
      velocity[i] = cfg.momentum * velocity[i] + lg.grad[i];
      coords[i] = std::clamp(coords[i] - cfg.lr * velocity[i], 0.0, hi);
    }
    run.trajectory.push_back(coords);
    run.loss.push_back(loss_at(coords).loss);
    if (census_matches(coords)) {
      run.success = true;
      run.steps_to_converge = step + 1;
      return run;
    }
  }
  return run;
}

}  // namespace

ToyRun run_toy_1d(std::vector<double> source, const std::vector<double>& target,
                  HistLossKind kind, double noise_sigma, const ToyConfig& cfg) {
  check_range(source.data(), source.size(), cfg.grid);
  for (double t : target)
    if (!(t >= 0.0 && t <= cfg.grid - 1))
      throw std::invalid_argument("toy point outside the grid");
  const std::vector<int> want = rounded_census_1d(target, cfg.grid);

  return descend(
      std::move(source),
      [&](const std::vector<double>& pts) {
        return hist_loss_1d(pts, target, kind, cfg.kernel, cfg.grid);
      },
      [&](const std::vector<double>& pts) {
        return rounded_census_1d(pts, cfg.grid) == want;
      },
      noise_sigma, cfg);
}

ToyRun run_toy_2d(std::vector<std::array<double, 2>> source,
                  const std::vector<std::array<double, 2>>& target,
                  HistLossKind kind, double noise_sigma, const ToyConfig& cfg) {
  for (const auto& p : source) check_range(p.data(), 2, cfg.grid);
  for (const auto& p : target) check_range(p.data(), 2, cfg.grid);
  const std::vector<int> want = rounded_census_2d(target, cfg.grid);

  std::vector<double> flat(source.size() * 2);
  for (std::size_t k = 0; k < source.size(); ++k) {
    flat[2 * k] = source[k][0];
    flat[2 * k + 1] = source[k][1];
  }
  auto unflatten = [](const std::vector<double>& f) {
    std::vector<std::array<double, 2>> pts(f.size() / 2);
    for (std::size_t k = 0; k < pts.size(); ++k) pts[k] = {f[2 * k], f[2 * k + 1]};
    return pts;
  };

  return descend(
      std::move(flat),
      [&](const std::vector<double>& f) {
        return hist_loss_2d(unflatten(f), target, kind, cfg.kernel, cfg.grid);
      },
      [&](const std::vector<double>& f) {
        return rounded_census_2d(unflatten(f), cfg.grid) == want;
      },
      noise_sigma, cfg);
}

TrialReport run_toy_2d_census(int trials, int points, int grid,
                              HistLossKind kind, double noise_sigma,
                              const ToyConfig& cfg, int jobs) {
  if (trials < 1 || points < 1)
    throw std::invalid_argument("census needs trials >= 1 and points >= 1");

  std::vector<int> steps(trials, -1);
  std::vector<char> ok(trials, 0);

  parallel_for(trials, jobs, [&](int t) {
    Rng draw(cfg.seed + static_cast<std::uint64_t>(t));
    std::vector<std::array<double, 2>> src(points), dst(points);
    for (auto& p : src)
      p = {static_cast<double>(draw.uniform_int(0, grid - 1)),
           static_cast<double>(draw.uniform_int(0, grid - 1))};
    for (auto& p : dst)
      p = {static_cast<double>(draw.uniform_int(0, grid - 1)),
           static_cast<double>(draw.uniform_int(0, grid - 1))};

    ToyConfig trial_cfg = cfg;
    trial_cfg.grid = grid;
    trial_cfg.seed = cfg.seed + 0x9e3779b97f4a7c15ull + t;
    ToyRun run = run_toy_2d(std::move(src), dst, kind, noise_sigma, trial_cfg);
    ok[t] = run.success ? 1 : 0;
    steps[t] = run.steps_to_converge;
  });

  TrialReport report;
  report.trials = trials;
  std::vector<double> converged;
  for (int t = 0; t < trials; ++t)
    if (ok[t]) {
      ++report.successes;
      converged.push_back(static_cast<double>(steps[t]));
    }
  if (!converged.empty()) {
    std::sort(converged.begin(), converged.end());
    std::size_t mid = converged.size() / 2;
    report.median_steps = converged.size() % 2 == 1
                              ? converged[mid]
                              : 0.5 * (converged[mid - 1] + converged[mid]);
  }
  return report;
}

}  // namespace coocmatch
