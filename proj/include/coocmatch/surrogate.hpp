#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "coocmatch/cooc.hpp"
#include "coocmatch/geometry.hpp"
#include "coocmatch/image.hpp"

namespace coocmatch {

// Two synthetic classes with distinct co-occurrence signatures:
//   smooth:   box-blurred uniform noise, neighbor deltas stay small
//   artifact: 2x nearest-neighbor-upsampled raw noise, so aligned 2x2
//             blocks are constant before any post noise
enum class SynthClass { smooth, artifact };

struct SynthSpec {
  SynthClass cls = SynthClass::smooth;
  int size = 64;                 // square, even
  std::uint64_t seed = 0;
  double post_noise_sigma = 0.0; // gaussian added after construction
};

ImageBuffer generate_image(const SynthSpec& spec);

struct LabeledSet {
  std::vector<ImageBuffer> images;
  std::vector<int> labels;  // 1 = artifact
};

// n_per_class images of each class; image seeds derive from spec.seed and
// the image index, so the set is reproducible.
LabeledSet generate_dataset(const SynthSpec& spec, int n_per_class);

// Max-scaled discrete co-occurrence matrices, average-pooled with pool x pool
// windows (256 bins / pool 8 -> 32x32 = 1024 dims per matrix), concatenated
// over the expanded geometry list.
std::vector<double> cooc_feature_vector(const ImageBuffer& image,
                                        const std::vector<PairGeometry>& geometries,
                                        int pool = 8);

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  int pool = 8;
  std::vector<PairGeometry> geometries;
  std::uint64_t seed = 0;  // provenance: dataset seed the model was fit on

  double score(const std::vector<double>& features) const;  // logit
  int predict(const std::vector<double>& features) const;   // 1 = artifact
  int predict_image(const ImageBuffer& image) const;
};

struct TrainConfig {
  double lr = 2.0;
  int iters = 500;
  double l2 = 1e-4;
};

// Full-batch logistic regression from zero weights; deterministic.
// Requires both labels present.
LinearModel train_linear(const std::vector<std::vector<double>>& features,
                         const std::vector<int>& labels,
                         const TrainConfig& cfg = {});

double evaluate(const LinearModel& model,
                const std::vector<std::vector<double>>& features,
                const std::vector<int>& labels);

void write_model_json(const LinearModel& model, std::ostream& out);
LinearModel read_model_json(std::istream& in);
void write_model_file(const LinearModel& model, const std::string& path);
LinearModel read_model_file(const std::string& path);

}  // namespace coocmatch
