#include "coocmatch/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "coocmatch/rng.hpp"

namespace coocmatch {

void AttackConfig::validate() const {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (!(lr > 0.0)) throw std::invalid_argument("lr must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0))
    throw std::invalid_argument("momentum must be in [0,1)");
  if (epochs.empty()) throw std::invalid_argument("epoch schedule is empty");
  for (const auto& e : epochs) {
    if (e.steps < 1) throw std::invalid_argument("epoch steps must be >= 1");
    if (!(e.noise_sigma >= 0.0))
      throw std::invalid_argument("noise sigma must be >= 0");
  }
  if (geometries.empty())
    throw std::invalid_argument("at least one geometry is required");
  if (pyramid.levels < 1)
    throw std::invalid_argument("pyramid needs at least one level");
  if (!(grad_scale >= 0.0))
    throw std::invalid_argument("grad_scale must be >= 0");
}

int AttackConfig::total_steps() const {
  int n = 0;
  for (const auto& e : epochs) n += e.steps;
  return n;
}

LossGrad total_loss(const ImageBuffer& x, const PyramidTargets& targets,
                    const ImageBuffer& source, const AttackConfig& cfg) {
  if (!x.same_shape(source))
    throw std::invalid_argument("total_loss: shape mismatch");
  LossGrad lg = pyramid_loss(x, targets);
  if (cfg.lambda > 0.0) {
    const double n = static_cast<double>(x.size());
    const double scale = cfg.lambda / n;
    double l1 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double d = x.data()[i] - source.data()[i];
      l1 += std::fabs(d);
      if (d > 0.0)
        lg.grad.data[i] += scale;
      else if (d < 0.0)
        lg.grad.data[i] -= scale;
    }
    lg.loss += cfg.lambda * (l1 / n);
  }
  return lg;
}

namespace {

double mean_abs_diff(const ImageBuffer& a, const ImageBuffer& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += std::fabs(a.data()[i] - b.data()[i]);
  return s / static_cast<double>(a.size());
}

double auto_grad_scale(const AttackConfig& cfg, int h, int w) {
  if (cfg.grad_scale > 0.0) return cfg.grad_scale;
  double sum = 0.0;
  for (const auto& g : cfg.geometries)
    sum += static_cast<double>(pair_count(g, h, w));
  // twice the mean pair count: the default schedule then lands near the
  // discrete floor instead of being cut off mid-descent
  return 2.0 * sum / static_cast<double>(cfg.geometries.size());
}

}  // namespace

double cooc_l1_distance(const ImageBuffer& a, const ImageBuffer& b,
                        const std::vector<PairGeometry>& geometries) {
  double total = 0.0;
  for (const auto& g : geometries) {
    CoocStack sa = scale_cooc(cooc_discrete(a, g), ScaleMode::mass);
    CoocStack sb = scale_cooc(cooc_discrete(b, g), ScaleMode::mass);
    const std::size_t n = static_cast<std::size_t>(sa.bins()) * sa.bins();
    for (std::size_t p = 0; p < sa.pair_count(); ++p) {
      const double* ma = sa.mat(p);
      const double* mb = sb.mat(p);
      for (std::size_t i = 0; i < n; ++i) total += std::fabs(ma[i] - mb[i]);
    }
  }
  return total;
}

AttackResult run_attack(const ImageBuffer& source, const ImageBuffer& target,
                        const AttackConfig& cfg) {
  cfg.validate();
  if (!source.same_shape(target))
    throw std::invalid_argument("run_attack: source/target shape mismatch");
  source.validate();
  target.validate();

  PyramidTargets targets = precompute_pyramid_targets(
      target, cfg.pyramid, cfg.kernel, cfg.geometries);

  const double scale = auto_grad_scale(cfg, source.height(), source.width());
  Rng rng(cfg.seed);

  ImageBuffer x = source.to_real();
  ImageBuffer eval = x;
  std::vector<double> velocity(x.size(), 0.0);

  AttackResult result{ImageBuffer(), 0.0, 0.0, {}};
  result.trace.rows.reserve(cfg.total_steps());

  int global_step = 0;
  for (std::size_t e = 0; e < cfg.epochs.size(); ++e) {
    const AttackEpoch& epoch = cfg.epochs[e];
    std::fill(velocity.begin(), velocity.end(), 0.0);

    for (int s = 0; s < epoch.steps; ++s, ++global_step) {
      if (epoch.noise_sigma > 0.0) {
        for (std::size_t i = 0; i < x.size(); ++i)
          eval.data()[i] = x.data()[i] + rng.gaussian(epoch.noise_sigma);
        if (cfg.persist_noise) x.data() = eval.data();
      } else {
        eval.data() = x.data();
      }

      LossGrad lg = total_loss(eval, targets, source, cfg);
      if (!std::isfinite(lg.loss))
        throw std::runtime_error("run_attack: non-finite loss at step " +
                                 std::to_string(global_step));

      double img = mean_abs_diff(eval, source);
      double hist = lg.loss - cfg.lambda * img;
      result.trace.rows.push_back(
          {global_step, static_cast<int>(e), hist, img, lg.loss});

      for (std::size_t i = 0; i < x.size(); ++i) {
        velocity[i] = cfg.momentum * velocity[i] + scale * lg.grad.data[i];
        double v = x.data()[i] - cfg.lr * velocity[i];
        x.data()[i] = v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v);
      }
    }

    ImageBuffer snapped = x.rounded();
    result.trace.checkpoints.push_back(
        {static_cast<int>(e), cooc_l1_distance(snapped, target, cfg.geometries),
         mean_abs_diff(snapped, source)});
    x = snapped.to_real();
  }

  result.adversarial = x.rounded();
  result.final_hist_l1 =
      cooc_l1_distance(result.adversarial, target, cfg.geometries);
  result.final_image_l1 = mean_abs_diff(result.adversarial, source);
  return result;
}

AttackResult run_reverse_attack(const ImageBuffer& real_source,
                                const ImageBuffer& gan_target,
                                const AttackConfig& cfg) {
  return run_attack(real_source, gan_target, cfg);
}

void write_trace_csv(const AttackTrace& trace, std::ostream& out) {
  out.precision(17);
  out << "step,epoch,hist_loss,image_l1,total_loss\n";
  for (const auto& r : trace.rows)
    out << r.step << "," << r.epoch << "," << r.hist_loss << "," << r.image_l1
        << "," << r.total_loss << "\n";
}

}  // namespace coocmatch
