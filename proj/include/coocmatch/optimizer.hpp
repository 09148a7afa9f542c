#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "coocmatch/softhist.hpp"

namespace coocmatch {

struct AttackEpoch {
  int steps = 0;
  double noise_sigma = 0.0;
};

struct AttackConfig {
  double lambda = 0.0;     // weight of the image-space L1 term
  double lr = 0.01;
  double momentum = 0.9;
  std::vector<AttackEpoch> epochs = {{200, 0.01}, {50, 0.01}, {50, 0.0}};
  InterpKernel kernel = InterpKernel::raised_cosine;
  std::vector<PairGeometry> geometries = {PairGeometry::horizontal()};
  PyramidSpec pyramid;
  std::uint64_t seed = 0;

  // Noise normally perturbs only the point where the gradient is evaluated;
  // this switches to adding it to the iterate itself.
  bool persist_noise = false;

  // Multiplier applied to the gradient before the momentum update. The
  // objective is normalized (per-mass histograms, mean-per-pixel image
  // term), which shrinks gradient entries by the pair count; at lr 0.01 the
  // iterate would move microns per step. 0 selects twice the mean pair
  // count of the configured geometries, which restores the step sizes of
  // the unnormalized objective and lets the default 300-step schedule
  // finish its descent instead of stopping partway.
  double grad_scale = 0.0;

  void validate() const;
  int total_steps() const;
};

struct TraceRow {
  int step = 0;   // global step index, 0-based
  int epoch = 0;
  double hist_loss = 0.0;
  double image_l1 = 0.0;
  double total_loss = 0.0;
};

struct EpochCheckpoint {
  int epoch = 0;
  double hist_l1 = 0.0;   // discrete, mass-normalized, vs the target
  double image_l1 = 0.0;  // mean abs pixel delta vs the source
};

struct AttackTrace {
  std::vector<TraceRow> rows;
  std::vector<EpochCheckpoint> checkpoints;  // after each epoch's rounding
};

struct AttackResult {
  ImageBuffer adversarial;   // integer mode
  double final_hist_l1 = 0.0;
  double final_image_l1 = 0.0;
  AttackTrace trace;
};

// pyramid_loss(x, targets) + lambda * mean |x - source|, with gradient.
LossGrad total_loss(const ImageBuffer& x, const PyramidTargets& targets,
                    const ImageBuffer& source, const AttackConfig& cfg);

// Heavy-ball descent: v <- momentum*v + g, x <- clamp(x - lr*v). The epoch
// schedule controls steps and noise; each epoch ends with a round to
// integers and a momentum reset. Bit-identical for identical inputs and
// seed. Throws on a non-finite loss.
AttackResult run_attack(const ImageBuffer& source, const ImageBuffer& target,
                        const AttackConfig& cfg);

// Same machinery with the roles swapped: pushes a real image's statistics
// onto a generated target's.
AttackResult run_reverse_attack(const ImageBuffer& real_source,
                                const ImageBuffer& gan_target,
                                const AttackConfig& cfg);

// Mass-normalized L1 between the discrete co-occurrence stacks of two
// integer images, summed over the given geometries.
double cooc_l1_distance(const ImageBuffer& a, const ImageBuffer& b,
                        const std::vector<PairGeometry>& geometries);

// step,epoch,hist_loss,image_l1,total_loss
void write_trace_csv(const AttackTrace& trace, std::ostream& out);

}  // namespace coocmatch
