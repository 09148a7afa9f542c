#include <array>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "coocmatch/toylab.hpp"

using namespace coocmatch;

TEST_CASE("a matching start succeeds before any update") {
  ToyConfig cfg;
  ToyRun run = run_toy_1d({2.0, 3.0}, {3.0, 2.0}, HistLossKind::l1_pyramid,
                          0.01, cfg);
  CHECK(run.success);
  CHECK(run.steps_to_converge == 0);
  REQUIRE(!run.trajectory.empty());
  CHECK(run.trajectory[0] == std::vector<double>{2.0, 3.0});
}

TEST_CASE("zero noise is deterministic") {
  ToyConfig cfg;
  cfg.max_steps = 50;
  auto once = run_toy_1d({1.0, 2.0, 3.0}, {2.0, 3.0, 4.0},
                         HistLossKind::l1_pyramid, 0.0, cfg);
  auto twice = run_toy_1d({1.0, 2.0, 3.0}, {2.0, 3.0, 4.0},
                          HistLossKind::l1_pyramid, 0.0, cfg);
  REQUIRE(once.trajectory.size() == twice.trajectory.size());
  for (std::size_t s = 0; s < once.trajectory.size(); ++s)
    CHECK(once.trajectory[s] == twice.trajectory[s]);
  CHECK(once.success == twice.success);
  CHECK(once.steps_to_converge == twice.steps_to_converge);
}

TEST_CASE("pointwise loss freezes the shifted triple") {
  ToyConfig cfg;
  cfg.max_steps = 200;
  ToyRun run = run_toy_1d({1.0, 2.0, 3.0}, {2.0, 3.0, 4.0},
                          HistLossKind::l1_pointwise, 0.0, cfg);
  CHECK_FALSE(run.success);
  const auto& last = run.trajectory.back();
  CHECK(last == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(run.loss.back() == doctest::Approx(run.loss.front()));
}

TEST_CASE("pyramid loss moves the shifted triple home") {
  ToyConfig cfg;
  cfg.seed = 5;
  ToyRun run = run_toy_1d({1.0, 2.0, 3.0}, {2.0, 3.0, 4.0},
                          HistLossKind::l1_pyramid, 0.01, cfg);
  CHECK(run.success);
  CHECK(run.steps_to_converge >= 1);
  CHECK(run.steps_to_converge <= 2000);
}

TEST_CASE("noise splits coincident points, zero noise cannot") {
  // both points start identically; symmetric gradients keep them glued
  ToyConfig cfg;
  cfg.max_steps = 500;
  ToyRun frozen = run_toy_1d({4.0, 4.0}, {3.0, 5.0},
                             HistLossKind::l1_pyramid, 0.0, cfg);
  CHECK_FALSE(frozen.success);
  for (const auto& state : frozen.trajectory)
    CHECK(state[0] == doctest::Approx(state[1]).epsilon(1e-12));

  int successes = 0;
  for (int seed = 0; seed < 10; ++seed) {
    ToyConfig noisy;
    noisy.max_steps = 2000;
    noisy.seed = seed;
    ToyRun run = run_toy_1d({4.0, 4.0}, {3.0, 5.0},
                            HistLossKind::l1_pyramid, 0.01, noisy);
    successes += run.success ? 1 : 0;
  }
  CHECK(successes >= 6);
}

TEST_CASE("trajectory stays inside the grid box") {
  ToyConfig cfg;
  cfg.max_steps = 300;
  cfg.seed = 17;
  ToyRun run = run_toy_1d({0.0, 7.0}, {7.0, 0.0}, HistLossKind::l1_pyramid,
                          0.05, cfg);
  for (const auto& state : run.trajectory)
    for (double v : state) {
      CHECK(v >= 0.0);
      CHECK(v <= 7.0);
    }
}

TEST_CASE("2d descent recovers a small rearrangement") {
  ToyConfig cfg;
  cfg.seed = 23;
  std::vector<std::array<double, 2>> src = {{1.0, 1.0}, {5.0, 2.0}};
  std::vector<std::array<double, 2>> tgt = {{2.0, 1.0}, {5.0, 3.0}};
  ToyRun run = run_toy_2d(src, tgt, HistLossKind::l1_pyramid, 0.01, cfg);
  CHECK(run.success);
  REQUIRE(!run.trajectory.empty());
  CHECK(run.trajectory[0].size() == 4);
}

TEST_CASE("census separates the two loss families") {
  ToyConfig cfg;
  cfg.max_steps = 800;
  TrialReport pyramid = run_toy_2d_census(20, 4, 8, HistLossKind::l1_pyramid,
                                          0.01, cfg, 1);
  TrialReport pointwise = run_toy_2d_census(20, 4, 8, HistLossKind::l1_pointwise,
                                            0.01, cfg, 1);
  CHECK(pyramid.trials == 20);
  CHECK(pyramid.successes > pointwise.successes);
  CHECK(pyramid.successes >= 15);
  if (pyramid.successes > 0) CHECK(pyramid.median_steps >= 0.0);
  CHECK(pointwise.median_steps <= cfg.max_steps);
}

TEST_CASE("census is reproducible for a fixed seed") {
  ToyConfig cfg;
  cfg.max_steps = 300;
  cfg.seed = 31;
  TrialReport a = run_toy_2d_census(10, 4, 8, HistLossKind::l1_pyramid,
                                    0.01, cfg, 1);
  TrialReport b = run_toy_2d_census(10, 4, 8, HistLossKind::l1_pyramid,
                                    0.01, cfg, 2);
  CHECK(a.successes == b.successes);
  CHECK(a.median_steps == b.median_steps);
}
