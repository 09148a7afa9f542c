#include "coocmatch/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "coocmatch/rng.hpp"

namespace coocmatch {

namespace {

// One box-blur pass with a (2r+1)^2 window, clamped at the borders.
void box_blur(std::vector<double>& px, int h, int w, int ch, int r) {
  std::vector<double> tmp(px.size());
  auto idx = [&](int y, int x, int c) {
    return (static_cast<std::size_t>(y) * w + x) * ch + c;
  };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        int n = 0;
        for (int dy = -r; dy <= r; ++dy) {
          int yy = y + dy;
          if (yy < 0 || yy >= h) continue;
          for (int dx = -r; dx <= r; ++dx) {
            int xx = x + dx;
            if (xx < 0 || xx >= w) continue;
            acc += px[idx(yy, xx, c)];
            ++n;
          }
        }
        tmp[idx(y, x, c)] = acc / n;
      }
  px.swap(tmp);
}

}  // namespace

ImageBuffer generate_image(const SynthSpec& spec) {
  if (spec.size < 2 || spec.size % 2 != 0)
    throw std::invalid_argument("generate_image: size must be even and >= 2");
  const int n = spec.size;
  Rng rng(spec.seed);
  ImageBuffer out(n, n, 3, PixelMode::real);

  if (spec.cls == SynthClass::smooth) {
    for (double& v : out.data()) v = rng.uniform(0.0, 255.0);
    box_blur(out.data(), n, n, 3, 2);
    box_blur(out.data(), n, n, 3, 2);
  } else {
    const int half = n / 2;
    std::vector<double> base(static_cast<std::size_t>(half) * half * 3);
    for (double& v : base) v = rng.uniform(0.0, 255.0);
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x)
        for (int c = 0; c < 3; ++c)
          out.at(y, x, c) =
              base[(static_cast<std::size_t>(y / 2) * half + x / 2) * 3 + c];
  }

  if (spec.post_noise_sigma > 0.0)
    for (double& v : out.data()) v += rng.gaussian(spec.post_noise_sigma);

  return out.rounded();
}

LabeledSet generate_dataset(const SynthSpec& spec, int n_per_class) {
  if (n_per_class < 1)
    throw std::invalid_argument("generate_dataset: n_per_class must be >= 1");
  LabeledSet set;
  for (int i = 0; i < n_per_class; ++i) {
    for (SynthClass cls : {SynthClass::smooth, SynthClass::artifact}) {
      SynthSpec s = spec;
      s.cls = cls;
      s.seed = spec.seed + 2ull * i + (cls == SynthClass::artifact ? 1 : 0);
      set.images.push_back(generate_image(s));
      set.labels.push_back(cls == SynthClass::artifact ? 1 : 0);
    }
  }
  return set;
}

std::vector<double> cooc_feature_vector(const ImageBuffer& image,
                                        const std::vector<PairGeometry>& geometries,
                                        int pool) {
  if (pool < 1 || 256 % pool != 0)
    throw std::invalid_argument("cooc_feature_vector: pool must divide 256");
  const int out_bins = 256 / pool;
  const double inv_window = 1.0 / (static_cast<double>(pool) * pool);

  std::vector<double> features;
  for (const auto& g : geometries) {
    CoocStack stack = scale_cooc(cooc_discrete(image, g), ScaleMode::max);
    for (std::size_t p = 0; p < stack.pair_count(); ++p) {
      for (int bi = 0; bi < out_bins; ++bi)
        for (int bj = 0; bj < out_bins; ++bj) {
          double acc = 0.0;
          for (int i = bi * pool; i < (bi + 1) * pool; ++i)
            for (int j = bj * pool; j < (bj + 1) * pool; ++j)
              acc += stack.at(p, i, j);
          features.push_back(acc * inv_window);
        }
    }
  }
  return features;
}

double LinearModel::score(const std::vector<double>& features) const {
  if (features.size() != weights.size())
    throw std::invalid_argument("LinearModel: feature size mismatch");
  double s = bias;
  for (std::size_t i = 0; i < weights.size(); ++i)
    s += weights[i] * features[i];
  return s;
}

int LinearModel::predict(const std::vector<double>& features) const {
  return score(features) > 0.0 ? 1 : 0;
}

int LinearModel::predict_image(const ImageBuffer& image) const {
  return predict(cooc_feature_vector(image, geometries, pool));
}

LinearModel train_linear(const std::vector<std::vector<double>>& features,
                         const std::vector<int>& labels,
                         const TrainConfig& cfg) {
  if (features.empty() || features.size() != labels.size())
    throw std::invalid_argument("train_linear: bad dataset");
  bool has0 = false, has1 = false;
  for (int l : labels) {
    if (l == 0) has0 = true;
    else if (l == 1) has1 = true;
    else throw std::invalid_argument("train_linear: labels must be 0/1");
  }
  if (!has0 || !has1)
    throw std::invalid_argument("train_linear: need both classes");

  const std::size_t dim = features[0].size();
  for (const auto& f : features)
    if (f.size() != dim)
      throw std::invalid_argument("train_linear: ragged features");

  LinearModel model;
  model.weights.assign(dim, 0.0);
  const double inv_n = 1.0 / static_cast<double>(features.size());

  std::vector<double> gw(dim);
  for (int it = 0; it < cfg.iters; ++it) {
    std::fill(gw.begin(), gw.end(), 0.0);
    double gb = 0.0;
    for (std::size_t k = 0; k < features.size(); ++k) {
      double s = model.score(features[k]);
      double p = 1.0 / (1.0 + std::exp(-s));
      double err = p - static_cast<double>(labels[k]);
      for (std::size_t i = 0; i < dim; ++i) gw[i] += err * features[k][i];
      gb += err;
    }
    for (std::size_t i = 0; i < dim; ++i)
      model.weights[i] -=
          cfg.lr * (gw[i] * inv_n + cfg.l2 * model.weights[i]);
    model.bias -= cfg.lr * gb * inv_n;
  }
  return model;
}

double evaluate(const LinearModel& model,
                const std::vector<std::vector<double>>& features,
                const std::vector<int>& labels) {
  if (features.empty() || features.size() != labels.size())
    throw std::invalid_argument("evaluate: bad dataset");
  int hits = 0;
  for (std::size_t k = 0; k < features.size(); ++k)
    if (model.predict(features[k]) == labels[k]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(features.size());
}

void write_model_json(const LinearModel& model, std::ostream& out) {
  nlohmann::json geoms = nlohmann::json::array();
  for (const auto& g : model.geometries) geoms.push_back(to_string(g));
  nlohmann::json doc = {{"weights", model.weights},
                        {"bias", model.bias},
                        {"pool", model.pool},
                        {"geometries", geoms},
                        {"seed", model.seed}};
  out << doc.dump(2) << "\n";
}

LinearModel read_model_json(std::istream& in) {
  nlohmann::json doc = nlohmann::json::parse(in);
  LinearModel model;
  model.weights = doc.at("weights").get<std::vector<double>>();
  model.bias = doc.at("bias").get<double>();
  model.pool = doc.at("pool").get<int>();
  model.seed = doc.value("seed", 0ull);
  for (const auto& g : doc.at("geometries"))
    model.geometries.push_back(parse_geometry(g.get<std::string>()));
  return model;
}

void write_model_file(const LinearModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  write_model_json(model, out);
}

LinearModel read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return read_model_json(in);
}

}  // namespace coocmatch
