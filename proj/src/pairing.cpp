#include "coocmatch/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace coocmatch {

Hist1dRgb rgb_hist1d(const ImageBuffer& image) {
  if (image.mode() != PixelMode::integer)
    throw std::invalid_argument("rgb_hist1d: image must be integer mode");
  if (image.channels() != 3)
    throw std::invalid_argument("rgb_hist1d: needs a 3-channel image");
  image.validate();

  Hist1dRgb h;
  for (auto& c : h.channel) c.assign(256, 0.0);
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x)
      for (int c = 0; c < 3; ++c)
        h.channel[c][static_cast<int>(image.at(y, x, c))] += 1.0;

  const double inv = 1.0 / (static_cast<double>(image.height()) * image.width());
  for (auto& c : h.channel)
    for (double& v : c) v *= inv;
  return h;
}

double emd1d(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("emd1d: length mismatch");
  double ma = 0.0, mb = 0.0;
  for (double v : a) ma += v;
  for (double v : b) mb += v;
  double scale = std::max({std::fabs(ma), std::fabs(mb), 1.0});
  if (std::fabs(ma - mb) > 1e-9 * scale)
    throw std::invalid_argument("emd1d: total mass mismatch");

  double cdf = 0.0, dist = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cdf += a[i] - b[i];
    dist += std::fabs(cdf);
  }
  return dist;
}

double emd_rgb(const Hist1dRgb& a, const Hist1dRgb& b) {
  double d = 0.0;
  for (int c = 0; c < 3; ++c) d += emd1d(a.channel[c], b.channel[c]);
  return d;
}

PairingPlan build_pairing(const std::vector<Hist1dRgb>& sources,
                          const std::vector<Hist1dRgb>& targets,
                          int block_size) {
  if (targets.empty())
    throw std::invalid_argument("build_pairing: empty target set");
  if (block_size < 1)
    throw std::invalid_argument("build_pairing: block_size must be >= 1");

  PairingPlan plan;
  plan.block_size = block_size;
  const int n_targets = static_cast<int>(targets.size());
  const int last_block = (n_targets - 1) / block_size;

  for (std::size_t s = 0; s < sources.size(); ++s) {
    int block = std::min(static_cast<int>(s) / block_size, last_block);
    int lo = block * block_size;
    int hi = std::min(lo + block_size, n_targets);

    int best = lo;
    double best_emd = emd_rgb(sources[s], targets[lo]);
    for (int t = lo + 1; t < hi; ++t) {
      double d = emd_rgb(sources[s], targets[t]);
      if (d < best_emd) {
        best_emd = d;
        best = t;
      }
    }
    plan.entries.push_back({static_cast<int>(s), best, best_emd});
  }
  return plan;
}

void write_plan_json(const PairingPlan& plan, std::ostream& out) {
  nlohmann::json arr = nlohmann::json::array();
  auto name = [](const std::vector<std::string>& paths, int idx) {
    if (idx >= 0 && idx < static_cast<int>(paths.size())) return paths[idx];
    return std::string("#") + std::to_string(idx);
  };
  for (const auto& e : plan.entries)
    arr.push_back({{"source", name(plan.source_paths, e.source)},
                   {"target", name(plan.target_paths, e.target)},
                   {"emd", e.emd}});
  out << arr.dump(2) << "\n";
}

PairingPlan read_plan_json(std::istream& in) {
  nlohmann::json arr = nlohmann::json::parse(in);
  if (!arr.is_array())
    throw std::runtime_error("pairing plan: expected a JSON array");
  PairingPlan plan;
  int idx = 0;
  for (const auto& item : arr) {
    PairingEntry e;
    e.source = idx;
    e.target = idx;  // path-addressed plans keep identity indices
    e.emd = item.value("emd", 0.0);
    plan.entries.push_back(e);
    plan.source_paths.push_back(item.at("source").get<std::string>());
    plan.target_paths.push_back(item.at("target").get<std::string>());
    ++idx;
  }
  return plan;
}

}  // namespace coocmatch
