// Acceptance gate: one line per criterion, nonzero exit on any failure.
// Each criterion measures against a fixed tolerance and a runtime budget.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "coocmatch/dft_attack.hpp"
#include "coocmatch/optimizer.hpp"
#include "coocmatch/pairing.hpp"
#include "coocmatch/png_io.hpp"
#include "coocmatch/rng.hpp"
#include "coocmatch/surrogate.hpp"
#include "coocmatch/toylab.hpp"
#include "coocmatch/verify.hpp"

using namespace coocmatch;
namespace fs = std::filesystem;
using cplx = std::complex<double>;

namespace {

int failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(const char* name, bool pass, double seconds, double budget,
            const std::string& detail) {
  bool in_time = seconds <= budget;
  bool ok = pass && in_time;
  std::printf("%s %s: %s (%.1fs of %.0fs budget)\n", ok ? "PASS" : "FAIL",
              name, detail.c_str(), seconds, budget);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

ImageBuffer random_int_image(Rng& rng, int h, int w, int c) {
  ImageBuffer img(h, w, c, PixelMode::integer);
  for (double& v : img.data()) v = rng.uniform_int(0, 255);
  return img;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.empty() ? -1.0 : v[v.size() / 2];
}

// ---- c1..c3, c9a: the library verify suites -------------------------------

void c1_integer_equivalence() {
  Timer t;
  SuiteResult r = verify_integer_equivalence(1, 200);
  report("c1 integer-equivalence", r.passed && r.metric == 0.0, t.seconds(),
         10.0, r.detail);
}

void c2_mass_conservation() {
  Timer t;
  SuiteResult r = verify_mass_conservation(2, 200);
  report("c2 mass-conservation", r.passed && r.metric < 1e-9, t.seconds(),
         10.0, r.detail + " (tol 1e-9)");
}

void c3_gradient_correctness() {
  Timer t;
  SuiteResult r = verify_gradients(3, 20);
  report("c3 gradient-check", r.passed && r.metric < 1e-4, t.seconds(), 60.0,
         r.detail + " (tol 1e-4)");
}

// ---- c4: 1D landscape ------------------------------------------------------

void c4_toy_1d() {
  Timer t;
  const std::vector<double> src = {1.0, 2.0, 3.0}, tgt = {2.0, 3.0, 4.0};

  // pointwise, no noise: exactly zero gradient, no movement at any step
  ToyConfig frozen_cfg;
  frozen_cfg.max_steps = 2000;
  ToyRun frozen = run_toy_1d(src, tgt, HistLossKind::l1_pointwise, 0.0,
                             frozen_cfg);
  bool frozen_ok = !frozen.success;
  for (const auto& state : frozen.trajectory)
    frozen_ok = frozen_ok && state == src;
  ToyLossGrad g0 = hist_loss_1d(src, tgt, HistLossKind::l1_pointwise,
                                InterpKernel::raised_cosine);
  for (double g : g0.grad) frozen_ok = frozen_ok && g == 0.0;

  // pyramid: strictly negative initial gradient in all three coordinates
  ToyLossGrad gp = hist_loss_1d(src, tgt, HistLossKind::l1_pyramid,
                                InterpKernel::raised_cosine);
  bool pull_ok = true;
  for (double g : gp.grad) pull_ok = pull_ok && g < 0.0;

  // 100 seeds each; unconverged runs count as the step cap
  int pyramid_hits = 0;
  std::vector<double> pyramid_steps, pointwise_steps;
  for (int seed = 0; seed < 100; ++seed) {
    ToyConfig cfg;
    cfg.seed = seed;
    ToyRun p = run_toy_1d(src, tgt, HistLossKind::l1_pyramid, 0.01, cfg);
    pyramid_hits += p.success ? 1 : 0;
    pyramid_steps.push_back(p.success ? p.steps_to_converge : cfg.max_steps);
    ToyRun q = run_toy_1d(src, tgt, HistLossKind::l1_pointwise, 0.01, cfg);
    pointwise_steps.push_back(q.success ? q.steps_to_converge : cfg.max_steps);
  }
  double med_p = median(pyramid_steps), med_q = median(pointwise_steps);
  bool census_ok = pyramid_hits >= 95 && med_p <= med_q / 5.0;

  report("c4 toy-1d-landscape", frozen_ok && pull_ok && census_ok, t.seconds(),
         120.0,
         fmt("pointwise frozen %s, pyramid pull %s, pyramid %d/100 (need 95), "
             "median steps %.0f vs %.0f (need 5x)",
             frozen_ok ? "yes" : "NO", pull_ok ? "yes" : "NO", pyramid_hits,
             med_p, med_q));
}

// ---- c5: 2D census ---------------------------------------------------------

void c5_toy_2d_census() {
  Timer t;
  ToyConfig cfg;
  TrialReport pyramid =
      run_toy_2d_census(100, 8, 8, HistLossKind::l1_pyramid, 0.01, cfg, 0);
  TrialReport pointwise =
      run_toy_2d_census(100, 8, 8, HistLossKind::l1_pointwise, 0.01, cfg, 0);
  bool ok = pyramid.successes >= 95 && pointwise.successes <= 30;
  report("c5 toy-2d-census", ok, t.seconds(), 300.0,
         fmt("pyramid %d/100 (need >=95), pointwise %d/100 (need <=30)",
             pyramid.successes, pointwise.successes));
}

// ---- c6: attack efficacy ---------------------------------------------------

void c6_attack_efficacy() {
  Timer t;
  int good = 0;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    SynthSpec s{SynthClass::artifact, 64, 5000ull + i, 0.0};
    SynthSpec g{SynthClass::smooth, 64, 6000ull + i, 0.0};
    ImageBuffer source = generate_image(s);
    ImageBuffer target = generate_image(g);
    AttackConfig cfg;
    cfg.seed = 70 + i;
    double initial = cooc_l1_distance(source, target, cfg.geometries);
    AttackResult res = run_attack(source, target, cfg);
    double ratio = res.final_hist_l1 / initial;
    worst = std::max(worst, ratio);
    if (ratio <= 0.25) ++good;
  }

  // trade-off direction across the image-weight sweep
  SynthSpec s{SynthClass::artifact, 64, 5000, 0.0};
  SynthSpec g{SynthClass::smooth, 64, 6000, 0.0};
  ImageBuffer source = generate_image(s);
  ImageBuffer target = generate_image(g);
  double prev_hist = -1.0, prev_img = 1e300;
  bool sweep_ok = true;
  for (double lambda : {0.0, 3.0, 10.0}) {
    AttackConfig cfg;
    cfg.lambda = lambda;
    cfg.seed = 70;
    AttackResult res = run_attack(source, target, cfg);
    sweep_ok = sweep_ok && res.final_hist_l1 >= prev_hist - 1e-9 &&
               res.final_image_l1 <= prev_img + 1e-9;
    prev_hist = res.final_hist_l1;
    prev_img = res.final_image_l1;
  }

  report("c6 attack-efficacy", good >= 18 && sweep_ok, t.seconds(), 900.0,
         fmt("%d/20 pairs at <=25%% of initial (worst %.1f%%), lambda sweep "
             "monotone %s",
             good, 100.0 * worst, sweep_ok ? "yes" : "NO"));
}

// ---- c7: throughput --------------------------------------------------------

void c7_throughput() {
  Rng rng(7);
  ImageBuffer source = random_int_image(rng, 256, 256, 3);
  ImageBuffer target = random_int_image(rng, 256, 256, 3);
  AttackConfig cfg;
  cfg.seed = 7;
  Timer t;
  AttackResult res = run_attack(source, target, cfg);
  double secs = t.seconds();
  report("c7 throughput", res.adversarial.size() == source.size(), secs, 60.0,
         fmt("256x256x3, %d steps, %.1fs", cfg.total_steps(), secs));
}

// ---- c8: DFT attack --------------------------------------------------------

std::vector<cplx> naive_dft(const ImageBuffer& img, int c) {
  const int h = img.height(), w = img.width();
  std::vector<cplx> out(static_cast<std::size_t>(h) * w);
  for (int u = 0; u < h; ++u)
    for (int v = 0; v < w; ++v) {
      cplx acc = 0.0;
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          static const double kTwoPi = 8.0 * std::atan(1.0);
          double ph = -kTwoPi * (static_cast<double>(u) * y / h +
                                 static_cast<double>(v) * x / w);
          acc += img.at(y, x, c) * cplx(std::cos(ph), std::sin(ph));
        }
      out[static_cast<std::size_t>(u) * w + v] = acc;
    }
  return out;
}

double blend_objective(const ImageBuffer& x, const ImageBuffer& g,
                       const ImageBuffer& r, double lambda) {
  // taps from the inverse unitary 3x3 transform of the defining spectrum
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
        double d = x.at(y, xx, c) - g.at(y, xx, c);
        acc += conv * conv + lambda * lambda * d * d;
      }
  return acc;
}

void c8_dft_attack() {
  Timer t;
  Rng rng(8);
  double worst_resid = 0.0, worst_limit = 0.0;
  bool optimal = true;
  const FreqWeights& w16 = kirchner_response_cached(16, 16);
  for (int pair = 0; pair < 20; ++pair) {
    ImageBuffer g = random_int_image(rng, 16, 16, 1);
    ImageBuffer r = random_int_image(rng, 16, 16, 1);
    auto fg = naive_dft(g, 0), fr = naive_dft(r, 0);
    for (double lambda : {0.003, 0.01, 0.03}) {
      ImageBuffer a = dft_attack_blend(g, r, lambda);
      auto fa = naive_dft(a, 0);
      const double l2 = lambda * lambda;
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < fa.size(); ++i) {
        cplx resid =
            w16.response[i] * (fa[i] - fr[i]) + l2 * (fa[i] - fg[i]);
        num = std::max(num, std::abs(resid));
        den = std::max(den, w16.response[i] * std::abs(fr[i]) +
                                l2 * std::abs(fg[i]));
      }
      worst_resid = std::max(worst_resid, num / den);

      double ja = blend_objective(a, g, r, lambda);
      optimal = optimal && ja <= blend_objective(g.to_real(), g, r, lambda) + 1e-9 &&
                ja <= blend_objective(r.to_real(), g, r, lambda) + 1e-9;
    }
    ImageBuffer lim = dft_attack_blend(g, r, 1e6);
    for (std::size_t i = 0; i < g.size(); ++i)
      worst_limit =
          std::max(worst_limit, std::fabs(lim.data()[i] - g.data()[i]));
  }
  bool ok = worst_resid < 1e-8 && worst_limit < 0.5 && optimal;
  report("c8 dft-attack", ok, t.seconds(), 30.0,
         fmt("normal-eq residual %.1e (tol 1e-8), 1e6-limit dev %.1e (tol "
             "0.5), optimal-vs-endpoints %s",
             worst_resid, worst_limit, optimal ? "yes" : "NO"));
}

// ---- c9: EMD oracle and pairing argmin -------------------------------------

void c9_emd_and_pairing() {
  Timer t;
  SuiteResult r = verify_emd_oracle(9, 100);

  Rng rng(99);
  bool argmin_ok = true;
  for (int inst = 0; inst < 5 && argmin_ok; ++inst) {
    std::vector<Hist1dRgb> sources, targets;
    for (int i = 0; i < 10; ++i) {
      sources.push_back(rgb_hist1d(random_int_image(rng, 8, 8, 3)));
      targets.push_back(rgb_hist1d(random_int_image(rng, 8, 8, 3)));
    }
    PairingPlan plan = build_pairing(sources, targets, 10);
    for (int s = 0; s < 10; ++s) {
      int best = 0;
      double best_emd = emd_rgb(sources[s], targets[0]);
      for (int k = 1; k < 10; ++k) {
        double d = emd_rgb(sources[s], targets[k]);
        if (d < best_emd) {
          best_emd = d;
          best = k;
        }
      }
      argmin_ok = argmin_ok && plan.entries[s].target == best &&
                  plan.entries[s].emd == best_emd;
    }
  }
  report("c9 emd-oracle", r.passed && argmin_ok, t.seconds(), 10.0,
         r.detail + (argmin_ok ? ", pairing argmin exact on 5x(10x10)"
                               : ", pairing argmin MISMATCH"));
}

// ---- c10: end-to-end surrogate ---------------------------------------------

LinearModel fit_detector(const LabeledSet& train,
                         const std::vector<PairGeometry>& geoms) {
  std::vector<std::vector<double>> features;
  for (const auto& img : train.images)
    features.push_back(cooc_feature_vector(img, geoms, 8));
  LinearModel m = train_linear(features, train.labels, {});
  m.geometries = geoms;
  m.pool = 8;
  return m;
}

void c10_surrogate() {
  Timer t;
  SynthSpec spec;
  spec.size = 64;
  spec.seed = 11;
  LabeledSet train = generate_dataset(spec, 200);
  SynthSpec held = spec;
  held.seed = 999;
  LabeledSet test = generate_dataset(held, 50);

  LinearModel model = fit_detector(train, {PairGeometry::horizontal()});
  int hits = 0;
  for (std::size_t i = 0; i < test.images.size(); ++i)
    hits += model.predict_image(test.images[i]) == test.labels[i] ? 1 : 0;
  double heldout = static_cast<double>(hits) / test.images.size();

  auto attack_pair = [&](int i, bool reverse,
                         const std::vector<PairGeometry>& geoms) {
    SynthSpec a{SynthClass::artifact, 64,
                (reverse ? 8000ull : 5000ull) + i, 0.0};
    SynthSpec s{SynthClass::smooth, 64, (reverse ? 7000ull : 6000ull) + i, 0.0};
    AttackConfig cfg;
    cfg.geometries = geoms;
    cfg.seed = (reverse ? 90 : 70) + i;
    if (reverse)
      return run_reverse_attack(generate_image(s), generate_image(a), cfg);
    return run_attack(generate_image(a), generate_image(s), cfg);
  };

  int detected = 0, flipped = 0;
  for (int i = 0; i < 20; ++i) {
    detected += model.predict_image(
        attack_pair(i, false, {PairGeometry::horizontal()}).adversarial);
    flipped += model.predict_image(
        attack_pair(i, true, {PairGeometry::horizontal()}).adversarial);
  }

  LinearModel cross = fit_detector(train, cross_band_feature_set());
  int cross_detected = 0;
  for (int i = 0; i < 20; ++i)
    cross_detected += cross.predict_image(
        attack_pair(i, false, cross_band_feature_set()).adversarial);

  bool ok = heldout >= 0.90 && detected <= 6 && flipped >= 14 &&
            cross_detected <= 9;
  report("c10 surrogate-end-to-end", ok, t.seconds(), 1200.0,
         fmt("held-out %.1f%% (need >=90), post-attack detection %d/20 (need "
             "<=30%%), reverse flips %d/20 (need >=70%%), cross-band "
             "detection %d/20 (need <50%%)",
             100.0 * heldout, detected, flipped, cross_detected));
}

// ---- c11: CLI determinism --------------------------------------------------

int run_cli(const std::string& args) {
  std::string cmd =
      std::string(CLI_BINARY_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<missing:" + path + ">";
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

void c11_cli_determinism() {
  Timer t;
  fs::path dir = fs::temp_directory_path() /
                 ("coocmatch_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto at = [&](const std::string& name) { return (dir / name).string(); };

  Rng rng(1100);
  save_png(random_int_image(rng, 16, 16, 3), at("s.png"));
  save_png(random_int_image(rng, 16, 16, 3), at("t.png"));
  fs::create_directories(at("srcdir"));
  fs::create_directories(at("tgtdir"));
  save_png(random_int_image(rng, 12, 12, 3), at("srcdir/a.png"));
  save_png(random_int_image(rng, 12, 12, 3), at("tgtdir/b.png"));
  {
    std::ofstream cfg(at("cfg.json"));
    cfg << "{\"epochs\": [{\"steps\": 8, \"noise_sigma\": 0.01},"
           " {\"steps\": 4, \"noise_sigma\": 0.0}], \"seed\": 5}";
  }

  struct Step {
    std::string args;
    std::vector<std::string> outputs;
  };
  std::vector<Step> steps = {
      {"features --input " + at("s.png") + " --out " + at("RUN.cooc") +
           " --csv " + at("RUN.csv"),
       {"RUN.cooc", "RUN.csv"}},
      {"attack-cooc --source " + at("s.png") + " --target " + at("t.png") +
           " --out " + at("RUN_adv.png") + " --trace " + at("RUN_tr.csv") +
           " --config " + at("cfg.json"),
       {"RUN_adv.png", "RUN_tr.csv"}},
      {"attack-dft --source " + at("s.png") + " --target " + at("t.png") +
           " --lambda 0.01 --out " + at("RUN_dft.png"),
       {"RUN_dft.png"}},
      {"pair --sources " + at("srcdir") + " --targets " + at("tgtdir") +
           " --out " + at("RUN_plan.json") + " --jobs 1",
       {"RUN_plan.json"}},
      {"toy1d --source 1,2,3 --target 2,3,4 --seed 4 --trajectory " +
           at("RUN_toy1.csv"),
       {"RUN_toy1.csv"}},
      {"toy2d --trials 4 --points 3 --steps 300 --seed 9 --jobs 1 --out " +
           at("RUN_census.json"),
       {"RUN_census.json"}},
      {"surrogate gen --out-dir " + at("RUN_data") + " --n 2 --size 16 "
           "--seed 6",
       {"RUN_data/smooth_0000.png", "RUN_data/artifact_0001.png"}},
      {"surrogate train --n 4 --size 16 --seed 6 --model " +
           at("RUN_model.json") + " --jobs 1",
       {"RUN_model.json"}},
      {"verify --seed 3 --json " + at("RUN_report.json"),
       {"RUN_report.json"}},
  };

  bool all_ok = true;
  std::string offender;
  for (const auto& step : steps) {
    std::vector<std::string> first;
    if (run_cli(step.args) != 0) {
      all_ok = false;
      offender = step.args.substr(0, step.args.find(' ')) + " (exit)";
      break;
    }
    for (const auto& out : step.outputs) first.push_back(read_bytes(at(out)));
    if (run_cli(step.args) != 0) {
      all_ok = false;
      offender = step.args.substr(0, step.args.find(' ')) + " (rerun exit)";
      break;
    }
    for (std::size_t i = 0; i < step.outputs.size(); ++i)
      if (read_bytes(at(step.outputs[i])) != first[i]) {
        all_ok = false;
        offender = step.outputs[i];
      }
    if (!all_ok) break;
  }

  std::error_code ec;
  fs::remove_all(dir, ec);
  report("c11 cli-determinism", all_ok, t.seconds(), 600.0,
         all_ok ? "9 subcommands rerun byte-identically"
                : "first divergence: " + offender);
}

}  // namespace

int main() {
  std::printf("acceptance gate, %d criteria\n", 11);
  c1_integer_equivalence();
  c2_mass_conservation();
  c3_gradient_correctness();
  c4_toy_1d();
  c5_toy_2d_census();
  c6_attack_efficacy();
  c7_throughput();
  c8_dft_attack();
  c9_emd_and_pairing();
  c10_surrogate();
  c11_cli_determinism();
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
