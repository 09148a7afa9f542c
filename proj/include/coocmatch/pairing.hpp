#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "coocmatch/image.hpp"

namespace coocmatch {

// Per-channel 256-bin value histograms, each normalized to unit mass.
struct Hist1dRgb {
  std::array<std::vector<double>, 3> channel;
};

Hist1dRgb rgb_hist1d(const ImageBuffer& image);

// Earth mover's distance between two 1D mass vectors of equal length and
// equal total mass (checked to 1e-9): sum_i |CDF_a(i) - CDF_b(i)|.
double emd1d(const std::vector<double>& a, const std::vector<double>& b);

double emd_rgb(const Hist1dRgb& a, const Hist1dRgb& b);

struct PairingEntry {
  int source = 0;
  int target = 0;
  double emd = 0.0;
};

struct PairingPlan {
  std::vector<PairingEntry> entries;  // one per source, in source order
  int block_size = 900;
  std::vector<std::string> source_paths;  // optional, filled by the CLI
  std::vector<std::string> target_paths;
};

// Sources and targets are split into consecutive blocks of block_size; each
// source is matched to the target with the smallest summed per-channel EMD
// inside its block (ties to the lowest target index). A source block beyond
// the last target block uses the last one. Targets may be reused.
PairingPlan build_pairing(const std::vector<Hist1dRgb>& sources,
                          const std::vector<Hist1dRgb>& targets,
                          int block_size = 900);

// JSON: a top-level array of {"source", "target", "emd"} objects; paths
// when available, else "#<index>".
void write_plan_json(const PairingPlan& plan, std::ostream& out);
PairingPlan read_plan_json(std::istream& in);

}  // namespace coocmatch
