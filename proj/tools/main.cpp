#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "coocmatch/batch.hpp"
#include "coocmatch/config.hpp"
#include "coocmatch/cooc.hpp"
#include "coocmatch/dft_attack.hpp"
#include "coocmatch/features.hpp"
#include "coocmatch/optimizer.hpp"
#include "coocmatch/pairing.hpp"
#include "coocmatch/parallel.hpp"
#include "coocmatch/png_io.hpp"
#include "coocmatch/rng.hpp"
#include "coocmatch/surrogate.hpp"
#include "coocmatch/toylab.hpp"
#include "coocmatch/verify.hpp"

namespace fs = std::filesystem;
using namespace coocmatch;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> list_pngs(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".png")
      files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<PairGeometry> geometries_from(const std::vector<std::string>& names) {
  if (names.empty()) return {PairGeometry::horizontal()};
  std::vector<PairGeometry> out;
  for (const auto& n : names) {
    if (n == "crossband-set") {
      for (const auto& g : cross_band_feature_set()) out.push_back(g);
    } else {
      out.push_back(parse_geometry(n));
    }
  }
  return out;
}

CoocStack merged_discrete(const ImageBuffer& img,
                          const std::vector<PairGeometry>& geoms) {
  std::vector<CoocStack> stacks;
  std::vector<PairLabel> labels;
  for (const auto& g : geoms) {
    stacks.push_back(cooc_discrete(img, g));
    for (const auto& l : stacks.back().pairs()) labels.push_back(l);
  }
  CoocStack merged(labels, 256);
  std::size_t p = 0;
  for (const auto& s : stacks)
    for (std::size_t q = 0; q < s.pair_count(); ++q, ++p)
      for (int i = 0; i < 256; ++i)
        for (int j = 0; j < 256; ++j)
          merged.at(p, i, j) = s.at(q, i, j);
  return merged;
}

void write_tensor_csv(const FeatureTensor& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out.precision(17);
  out << "plane,y,x,value\n";
  for (int p = 0; p < t.planes; ++p)
    for (int y = 0; y < t.height; ++y)
      for (int x = 0; x < t.width; ++x)
        out << p << "," << y << "," << x << "," << t.at(p, y, x) << "\n";
}

void write_trajectory_csv(const ToyRun& run, int dims,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out.precision(17);
  const std::size_t width = run.trajectory.empty() ? 0 : run.trajectory[0].size();
  out << "step";
  for (std::size_t i = 0; i < width; ++i) {
    if (dims == 2)
      out << "," << (i % 2 == 0 ? "x" : "y") << (i / 2);
    else
      out << ",x" << i;
  }
  out << ",loss\n";
  for (std::size_t s = 0; s < run.trajectory.size(); ++s) {
    out << s;
    for (double v : run.trajectory[s]) out << "," << v;
    out << "," << run.loss[s] << "\n";
  }
}

std::vector<std::array<double, 2>> to_points_2d(const std::vector<double>& flat,
                                                const char* what) {
  if (flat.size() % 2 != 0)
    throw std::runtime_error(std::string(what) +
                             ": expected an even x0,y0,x1,y1,... list");
  std::vector<std::array<double, 2>> pts(flat.size() / 2);
  for (std::size_t i = 0; i < pts.size(); ++i)
    pts[i] = {flat[2 * i], flat[2 * i + 1]};
  return pts;
}

ImageBuffer random_image(Rng& rng, int size, int channels) {
  ImageBuffer img(size, size, channels, PixelMode::integer);
  for (double& v : img.data())
    v = static_cast<double>(rng.uniform_int(0, 255));
  return img;
}

// Labeled PNGs named smooth_*.png / artifact_*.png.
LabeledSet read_labeled_dir(const std::string& dir) {
  LabeledSet set;
  for (const auto& path : list_pngs(dir)) {
    std::string stem = fs::path(path).stem().string();
    int label;
    if (stem.rfind("smooth_", 0) == 0) label = 0;
    else if (stem.rfind("artifact_", 0) == 0) label = 1;
    else throw std::runtime_error("unlabeled file (want smooth_*/artifact_*): " + path);
    set.images.push_back(load_png(path));
    set.labels.push_back(label);
  }
  if (set.images.empty())
    throw std::runtime_error("no labeled PNGs in " + dir);
  return set;
}

std::vector<std::vector<double>> feature_matrix(const LabeledSet& set,
                                                const std::vector<PairGeometry>& geoms,
                                                int pool, int jobs) {
  std::vector<std::vector<double>> features(set.images.size());
  parallel_for(static_cast<int>(set.images.size()), jobs, [&](int i) {
    features[i] = cooc_feature_vector(set.images[i], geoms, pool);
  });
  return features;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"co-occurrence statistics matching toolkit"};
  app.require_subcommand(1);
  int exit_code = 0;

  // ---- features ----------------------------------------------------------
  struct {
    std::string input, feature = "cooc", scale = "max", out, csv;
    std::vector<std::string> geometries;
    std::uint64_t seed = 0;
  } feat;
  {
    auto* cmd = app.add_subcommand("features", "extract detector features from a PNG");
    cmd->add_option("--input", feat.input, "input PNG")->required();
    cmd->add_option("--feature", feat.feature, "cooc | dft | direct");
    cmd->add_option("--geometry", feat.geometries,
                    "horizontal | diagonal | crossband:A,B | crossband-set (repeatable)");
    cmd->add_option("--scale", feat.scale, "cooc scaling: max | mass | none");
    cmd->add_option("--out", feat.out, "output file (.cooc binary, or CSV for dft/direct)");
    cmd->add_option("--csv", feat.csv, "also dump co-occurrence as sparse CSV");
    cmd->add_option("--seed", feat.seed, "unused; this command is deterministic");
    cmd->callback([&] {
      ImageBuffer img = load_png(feat.input);
      if (feat.feature == "cooc") {
        if (feat.out.empty() && feat.csv.empty())
          throw std::runtime_error("features: need --out and/or --csv");
        CoocStack stack = merged_discrete(img, geometries_from(feat.geometries));
        if (feat.scale == "max") stack = scale_cooc(stack, ScaleMode::max);
        else if (feat.scale == "mass") stack = scale_cooc(stack, ScaleMode::mass);
        else if (feat.scale != "none")
          throw std::runtime_error("features: unknown --scale " + feat.scale);
        if (!feat.out.empty()) write_cooc_file(stack, feat.out);
        if (!feat.csv.empty()) {
          std::ofstream out(feat.csv);
          if (!out) throw std::runtime_error("cannot open for write: " + feat.csv);
          write_cooc_csv(stack, out);
        }
      } else if (feat.feature == "dft" || feat.feature == "direct") {
        if (feat.out.empty()) throw std::runtime_error("features: need --out");
        FeatureTensor t = feat.feature == "dft" ? dft_feature(img)
                                                : direct_feature(img);
        write_tensor_csv(t, feat.out);
      } else {
        throw std::runtime_error("features: unknown --feature " + feat.feature);
      }
    });
  }

  // ---- attack-cooc -------------------------------------------------------
  struct {
    std::string source, target, out, trace, config, plan, replay, out_dir,
        manifest;
    double lambda = 0.0, lr = 0.01, momentum = 0.9, grad_scale = 0.0;
    std::string kernel = "raised_cosine";
    std::vector<std::string> geometries;
    std::uint64_t seed = 0;
    bool persist_noise = false;
    int jobs = 0;
  } ac;
  {
    auto* cmd = app.add_subcommand(
        "attack-cooc", "match a target's co-occurrence statistics by descent");
    cmd->add_option("--source", ac.source, "source PNG (image to perturb)");
    cmd->add_option("--target", ac.target, "target PNG (statistics donor)");
    cmd->add_option("--out", ac.out, "adversarial output PNG");
    cmd->add_option("--trace", ac.trace, "per-step loss CSV");
    cmd->add_option("--config", ac.config, "JSON config file (flags override)");
    auto* o_lambda = cmd->add_option("--lambda", ac.lambda, "image-space L1 weight");
    auto* o_lr = cmd->add_option("--lr", ac.lr, "learning rate");
    auto* o_mom = cmd->add_option("--momentum", ac.momentum, "momentum");
    auto* o_kernel = cmd->add_option("--kernel", ac.kernel, "triangle | raised_cosine");
    auto* o_geom = cmd->add_option("--geometry", ac.geometries,
                                   "loss geometries (repeatable; crossband-set for the six-pair set)");
    auto* o_seed = cmd->add_option("--seed", ac.seed, "noise seed");
    auto* o_pn = cmd->add_flag("--persist-noise", ac.persist_noise,
                               "add noise to the iterate instead of the gradient point");
    auto* o_gs = cmd->add_option("--grad-scale", ac.grad_scale,
                                 "gradient multiplier (0 = auto)");
    cmd->add_option("--plan", ac.plan, "pairing plan JSON: run every pair (batch mode)");
    cmd->add_option("--out-dir", ac.out_dir, "batch output directory");
    cmd->add_option("--manifest", ac.manifest, "manifest path (batch/replay)");
    cmd->add_option("--replay", ac.replay, "re-run a previous manifest");
    cmd->add_option("--jobs", ac.jobs, "parallel attacks (0 = COOCMATCH_JOBS or cores)");
    cmd->callback([&] {
      AttackConfig cfg;
      if (!ac.config.empty()) cfg = attack_config_from_json(slurp(ac.config));
      if (o_lambda->count()) cfg.lambda = ac.lambda;
      if (o_lr->count()) cfg.lr = ac.lr;
      if (o_mom->count()) cfg.momentum = ac.momentum;
      if (o_kernel->count()) cfg.kernel = parse_kernel(ac.kernel);
      if (o_geom->count()) cfg.geometries = geometries_from(ac.geometries);
      if (o_seed->count()) cfg.seed = ac.seed;
      if (o_pn->count()) cfg.persist_noise = ac.persist_noise;
      if (o_gs->count()) cfg.grad_scale = ac.grad_scale;
      cfg.validate();

      if (!ac.replay.empty()) {
        RunManifest manifest = replay_manifest(read_manifest_file(ac.replay), ac.jobs);
        if (!ac.manifest.empty()) write_manifest_file(manifest, ac.manifest);
        std::cout << "items " << manifest.items.size() << " failed "
                  << manifest.failed_count() << "\n";
        exit_code = manifest.failed_count() > 0 ? 1 : 0;
        return;
      }
      if (!ac.plan.empty()) {
        if (ac.out_dir.empty())
          throw std::runtime_error("attack-cooc: batch mode needs --out-dir");
        std::ifstream in(ac.plan);
        if (!in) throw std::runtime_error("cannot open: " + ac.plan);
        PairingPlan plan = read_plan_json(in);
        fs::create_directories(ac.out_dir);
        RunManifest manifest = batch_attack(plan, cfg, ac.out_dir, ac.jobs);
        write_manifest_file(manifest, ac.manifest.empty()
                                          ? ac.out_dir + "/manifest.json"
                                          : ac.manifest);
        std::cout << "items " << manifest.items.size() << " failed "
                  << manifest.failed_count() << "\n";
        exit_code = manifest.failed_count() > 0 ? 1 : 0;
        return;
      }
      if (ac.source.empty() || ac.target.empty() || ac.out.empty())
        throw std::runtime_error(
            "attack-cooc: need --source/--target/--out (or --plan/--replay)");
      ImageBuffer source = load_png(ac.source);
      ImageBuffer target = load_png(ac.target);
      AttackResult res = run_attack(source, target, cfg);
      save_png(res.adversarial, ac.out);
      if (!ac.trace.empty()) {
        std::ofstream out(ac.trace);
        if (!out) throw std::runtime_error("cannot open for write: " + ac.trace);
        write_trace_csv(res.trace, out);
      }
      nlohmann::json summary = {{"final_hist_l1", res.final_hist_l1},
                                {"final_image_l1", res.final_image_l1}};
      std::cout << summary.dump() << "\n";
    });
  }

  // ---- attack-dft --------------------------------------------------------
  struct {
    std::string source, target, out;
    double lambda = 0.01;
    std::uint64_t seed = 0;
  } ad;
  {
    auto* cmd = app.add_subcommand(
        "attack-dft", "closed-form high-frequency transplant attack");
    cmd->add_option("--source", ad.source, "source PNG")->required();
    cmd->add_option("--target", ad.target, "target PNG")->required();
    cmd->add_option("--lambda", ad.lambda, "closeness weight (> 0)");
    cmd->add_option("--out", ad.out, "adversarial output PNG")->required();
    cmd->add_option("--seed", ad.seed, "unused; this command is deterministic");
    cmd->callback([&] {
      if (ad.lambda <= 0.0)
        throw std::runtime_error("attack-dft: --lambda must be > 0");
      ImageBuffer source = load_png(ad.source);
      ImageBuffer target = load_png(ad.target);
      save_png(dft_attack(source, target, ad.lambda), ad.out);
      nlohmann::json summary = {{"imag_residue", dft_attack_imag_residue()}};
      std::cout << summary.dump() << "\n";
    });
  }

  // ---- pair --------------------------------------------------------------
  struct {
    std::string sources, targets, out;
    int block_size = 900;
    int jobs = 0;
    std::uint64_t seed = 0;
  } pr;
  {
    auto* cmd = app.add_subcommand(
        "pair", "match each source to the color-closest target per block");
    cmd->add_option("--sources", pr.sources, "directory of source PNGs")->required();
    cmd->add_option("--targets", pr.targets, "directory of target PNGs")->required();
    cmd->add_option("--block-size", pr.block_size, "block size");
    cmd->add_option("--out", pr.out, "plan JSON path")->required();
    cmd->add_option("--jobs", pr.jobs, "parallel histogram jobs");
    cmd->add_option("--seed", pr.seed, "unused; this command is deterministic");
    cmd->callback([&] {
      std::vector<std::string> src_files = list_pngs(pr.sources);
      std::vector<std::string> tgt_files = list_pngs(pr.targets);
      std::vector<Hist1dRgb> src_h(src_files.size()), tgt_h(tgt_files.size());
      auto hist_of = [](const std::string& path) {
        try {
          return rgb_hist1d(load_png(path));
        } catch (const std::exception& e) {
          throw std::runtime_error(path + ": " + e.what());
        }
      };
      parallel_for(static_cast<int>(src_files.size()), pr.jobs,
                   [&](int i) { src_h[i] = hist_of(src_files[i]); });
      parallel_for(static_cast<int>(tgt_files.size()), pr.jobs,
                   [&](int i) { tgt_h[i] = hist_of(tgt_files[i]); });
      PairingPlan plan = build_pairing(src_h, tgt_h, pr.block_size);
      plan.source_paths = src_files;
      plan.target_paths = tgt_files;
      std::ofstream out(pr.out);
      if (!out) throw std::runtime_error("cannot open for write: " + pr.out);
      write_plan_json(plan, out);
      std::cout << "pairs " << plan.entries.size() << "\n";
    });
  }

  // ---- toy1d -------------------------------------------------------------
  struct {
    std::vector<double> source, target;
    std::string loss = "l1_pyramid", kernel = "raised_cosine", trajectory;
    double noise = 0.01, lr = 0.01, momentum = 0.9;
    int steps = 2000, grid = 8;
    std::uint64_t seed = 0;
  } t1;
  {
    auto* cmd = app.add_subcommand("toy1d", "1D histogram-matching descent");
    cmd->add_option("--source", t1.source, "source values, comma-separated")
        ->required()->delimiter(',');
    cmd->add_option("--target", t1.target, "target values, comma-separated")
        ->required()->delimiter(',');
    cmd->add_option("--loss", t1.loss, "l1_pointwise | l2_pointwise | l1_pyramid");
    cmd->add_option("--noise", t1.noise, "gradient-point noise sigma");
    cmd->add_option("--lr", t1.lr, "learning rate");
    cmd->add_option("--momentum", t1.momentum, "momentum");
    cmd->add_option("--steps", t1.steps, "max steps");
    cmd->add_option("--grid", t1.grid, "histogram bins (values live in [0, grid-1])");
    cmd->add_option("--kernel", t1.kernel, "triangle | raised_cosine");
    cmd->add_option("--seed", t1.seed, "noise seed");
    cmd->add_option("--trajectory", t1.trajectory, "per-step CSV output");
    cmd->callback([&] {
      ToyConfig cfg;
      cfg.lr = t1.lr;
      cfg.momentum = t1.momentum;
      cfg.max_steps = t1.steps;
      cfg.grid = t1.grid;
      cfg.kernel = parse_kernel(t1.kernel);
      cfg.seed = t1.seed;
      ToyRun run = run_toy_1d(t1.source, t1.target, parse_hist_loss(t1.loss),
                              t1.noise, cfg);
      if (!t1.trajectory.empty()) write_trajectory_csv(run, 1, t1.trajectory);
      nlohmann::json summary = {{"success", run.success},
                                {"steps_to_converge", run.steps_to_converge},
                                {"final_loss", run.loss.back()}};
      std::cout << summary.dump() << "\n";
    });
  }

  // ---- toy2d -------------------------------------------------------------
  struct {
    std::vector<double> source, target;
    std::string loss = "l1_pyramid", kernel = "raised_cosine", trajectory, out;
    double noise = 0.01, lr = 0.01, momentum = 0.9;
    int steps = 2000, grid = 8, trials = 100, points = 8, jobs = 0;
    std::uint64_t seed = 0;
  } t2;
  {
    auto* cmd = app.add_subcommand(
        "toy2d", "2D histogram-matching descent (census, or one run with --source)");
    cmd->add_option("--source", t2.source, "x0,y0,x1,y1,... (single-run mode)")
        ->delimiter(',');
    cmd->add_option("--target", t2.target, "x0,y0,x1,y1,... (single-run mode)")
        ->delimiter(',');
    cmd->add_option("--trials", t2.trials, "census trials");
    cmd->add_option("--points", t2.points, "points per census trial");
    cmd->add_option("--loss", t2.loss, "l1_pointwise | l2_pointwise | l1_pyramid");
    cmd->add_option("--noise", t2.noise, "gradient-point noise sigma");
    cmd->add_option("--lr", t2.lr, "learning rate");
    cmd->add_option("--momentum", t2.momentum, "momentum");
    cmd->add_option("--steps", t2.steps, "max steps");
    cmd->add_option("--grid", t2.grid, "bins per axis");
    cmd->add_option("--kernel", t2.kernel, "triangle | raised_cosine");
    cmd->add_option("--seed", t2.seed, "master seed");
    cmd->add_option("--jobs", t2.jobs, "parallel trials");
    cmd->add_option("--trajectory", t2.trajectory, "per-step CSV (single-run mode)");
    cmd->add_option("--out", t2.out, "census summary JSON path (default stdout)");
    cmd->callback([&] {
      ToyConfig cfg;
      cfg.lr = t2.lr;
      cfg.momentum = t2.momentum;
      cfg.max_steps = t2.steps;
      cfg.grid = t2.grid;
      cfg.kernel = parse_kernel(t2.kernel);
      cfg.seed = t2.seed;
      HistLossKind kind = parse_hist_loss(t2.loss);

      nlohmann::json summary;
      if (!t2.source.empty() || !t2.target.empty()) {
        ToyRun run = run_toy_2d(to_points_2d(t2.source, "--source"),
                                to_points_2d(t2.target, "--target"), kind,
                                t2.noise, cfg);
        if (!t2.trajectory.empty()) write_trajectory_csv(run, 2, t2.trajectory);
        summary = {{"success", run.success},
                   {"steps_to_converge", run.steps_to_converge},
                   {"final_loss", run.loss.back()}};
      } else {
        TrialReport report = run_toy_2d_census(t2.trials, t2.points, t2.grid,
                                               kind, t2.noise, cfg, t2.jobs);
        summary = {{"trials", report.trials},
                   {"successes", report.successes},
                   {"median_steps", report.median_steps}};
      }
      if (!t2.out.empty()) {
        std::ofstream out(t2.out);
        if (!out) throw std::runtime_error("cannot open for write: " + t2.out);
        out << summary.dump(2) << "\n";
      }
      std::cout << summary.dump() << "\n";
    });
  }

  // ---- surrogate ---------------------------------------------------------
  auto* sur = app.add_subcommand("surrogate", "synthetic two-class detector");
  sur->require_subcommand(1);
  struct {
    std::string out_dir;
    int n = 100, size = 64;
    double post_noise = 0.0;
    std::uint64_t seed = 0;
  } sg;
  {
    auto* cmd = sur->add_subcommand("gen", "write labeled synthetic PNGs");
    cmd->add_option("--out-dir", sg.out_dir, "output directory")->required();
    cmd->add_option("--n", sg.n, "images per class");
    cmd->add_option("--size", sg.size, "image size (even)");
    cmd->add_option("--post-noise", sg.post_noise, "gaussian sigma added after synthesis");
    cmd->add_option("--seed", sg.seed, "master seed");
    cmd->callback([&] {
      SynthSpec spec;
      spec.size = sg.size;
      spec.seed = sg.seed;
      spec.post_noise_sigma = sg.post_noise;
      LabeledSet set = generate_dataset(spec, sg.n);
      fs::create_directories(sg.out_dir);
      int counts[2] = {0, 0};
      char buf[32];
      for (std::size_t i = 0; i < set.images.size(); ++i) {
        int label = set.labels[i];
        std::snprintf(buf, sizeof(buf), "%s_%04d.png",
                      label == 1 ? "artifact" : "smooth", counts[label]++);
        save_png(set.images[i], sg.out_dir + "/" + buf);
      }
      std::cout << "images " << set.images.size() << "\n";
    });
  }
  struct {
    std::string data_dir, model;
    std::vector<std::string> geometries;
    int n = 200, size = 64, pool = 8, iters = 500, jobs = 0;
    double lr = 2.0, l2 = 1e-4;
    std::uint64_t seed = 0;
  } st;
  {
    auto* cmd = sur->add_subcommand("train", "fit the linear detector");
    cmd->add_option("--data-dir", st.data_dir, "labeled PNGs (else generate)");
    cmd->add_option("--n", st.n, "generated images per class");
    cmd->add_option("--size", st.size, "generated image size");
    cmd->add_option("--seed", st.seed, "generation seed");
    cmd->add_option("--model", st.model, "model JSON output")->required();
    cmd->add_option("--geometry", st.geometries, "feature geometries (repeatable)");
    cmd->add_option("--pool", st.pool, "pooling window over the 256-bin axes");
    cmd->add_option("--iters", st.iters, "training iterations");
    cmd->add_option("--lr", st.lr, "training learning rate");
    cmd->add_option("--l2", st.l2, "L2 penalty");
    cmd->add_option("--jobs", st.jobs, "parallel feature jobs");
    cmd->callback([&] {
      LabeledSet set;
      if (!st.data_dir.empty()) {
        set = read_labeled_dir(st.data_dir);
      } else {
        SynthSpec spec;
        spec.size = st.size;
        spec.seed = st.seed;
        set = generate_dataset(spec, st.n);
      }
      std::vector<PairGeometry> geoms = geometries_from(st.geometries);
      auto features = feature_matrix(set, geoms, st.pool, st.jobs);
      TrainConfig tc;
      tc.lr = st.lr;
      tc.iters = st.iters;
      tc.l2 = st.l2;
      LinearModel model = train_linear(features, set.labels, tc);
      model.pool = st.pool;
      model.geometries = geoms;
      model.seed = st.seed;
      write_model_file(model, st.model);
      nlohmann::json summary = {
          {"train_accuracy", evaluate(model, features, set.labels)},
          {"samples", set.images.size()}};
      std::cout << summary.dump() << "\n";
    });
  }
  struct {
    std::string data_dir, model, images;
    int n = 200, size = 64, label = 1, jobs = 0;
    std::uint64_t seed = 0;
  } se;
  {
    auto* cmd = sur->add_subcommand("eval", "evaluate a stored model");
    cmd->add_option("--model", se.model, "model JSON")->required();
    cmd->add_option("--data-dir", se.data_dir, "labeled PNGs (else generate)");
    cmd->add_option("--images", se.images, "directory of PNGs, all of --label");
    cmd->add_option("--label", se.label, "label for --images (1 = artifact)");
    cmd->add_option("--n", se.n, "generated images per class");
    cmd->add_option("--size", se.size, "generated image size");
    cmd->add_option("--seed", se.seed, "generation seed");
    cmd->add_option("--jobs", se.jobs, "parallel feature jobs");
    cmd->callback([&] {
      LinearModel model = read_model_file(se.model);
      LabeledSet set;
      if (!se.images.empty()) {
        for (const auto& path : list_pngs(se.images)) {
          set.images.push_back(load_png(path));
          set.labels.push_back(se.label);
        }
        if (set.images.empty())
          throw std::runtime_error("no PNGs in " + se.images);
      } else if (!se.data_dir.empty()) {
        set = read_labeled_dir(se.data_dir);
      } else {
        SynthSpec spec;
        spec.size = se.size;
        spec.seed = se.seed;
        set = generate_dataset(spec, se.n);
      }
      auto features = feature_matrix(set, model.geometries, model.pool, se.jobs);
      int predicted_artifact = 0;
      for (const auto& f : features)
        predicted_artifact += model.predict(f);
      nlohmann::json summary = {
          {"accuracy", evaluate(model, features, set.labels)},
          {"samples", set.images.size()},
          {"predicted_artifact_rate",
           static_cast<double>(predicted_artifact) /
               static_cast<double>(features.size())}};
      std::cout << summary.dump() << "\n";
    });
  }

  // ---- verify ------------------------------------------------------------
  struct {
    std::uint64_t seed = 0;
    std::string json;
  } vf;
  {
    auto* cmd = app.add_subcommand("verify", "run the self-check suites");
    cmd->add_option("--seed", vf.seed, "suite seed");
    cmd->add_option("--json", vf.json, "machine-readable report path");
    cmd->callback([&] {
      std::vector<SuiteResult> results = verify_all(vf.seed);
      nlohmann::json report = nlohmann::json::array();
      bool all_passed = true;
      for (const auto& r : results) {
        std::cout << (r.passed ? "PASS" : "FAIL") << " " << r.name << ": "
                  << r.detail << "\n";
        report.push_back({{"suite", r.name},
                          {"passed", r.passed},
                          {"metric", r.metric},
                          {"detail", r.detail}});
        all_passed = all_passed && r.passed;
      }
      if (!vf.json.empty()) {
        std::ofstream out(vf.json);
        if (!out) throw std::runtime_error("cannot open for write: " + vf.json);
        out << report.dump(2) << "\n";
      }
      exit_code = all_passed ? 0 : 1;
    });
  }

  // ---- bench -------------------------------------------------------------
  struct {
    int size = 256, channels = 3;
    double lambda = 0.0;
    std::uint64_t seed = 0;
  } bn;
  {
    auto* cmd = app.add_subcommand("bench", "time one attack on random images");
    cmd->add_option("--size", bn.size, "image side length");
    cmd->add_option("--channels", bn.channels, "1 or 3");
    cmd->add_option("--lambda", bn.lambda, "image-space weight");
    cmd->add_option("--seed", bn.seed, "image and noise seed");
    cmd->callback([&] {
      Rng rng(bn.seed);
      ImageBuffer source = random_image(rng, bn.size, bn.channels);
      ImageBuffer target = random_image(rng, bn.size, bn.channels);
      AttackConfig cfg;
      cfg.lambda = bn.lambda;
      cfg.seed = bn.seed;
      auto t0 = std::chrono::steady_clock::now();
      AttackResult res = run_attack(source, target, cfg);
      double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      nlohmann::json summary = {{"size", bn.size},
                                {"steps", cfg.total_steps()},
                                {"seconds", seconds},
                                {"final_hist_l1", res.final_hist_l1},
                                {"final_image_l1", res.final_image_l1}};
      std::cout << summary.dump() << "\n";
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
