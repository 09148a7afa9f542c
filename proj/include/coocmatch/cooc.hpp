#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "coocmatch/geometry.hpp"
#include "coocmatch/image.hpp"

namespace coocmatch {

enum class ScaleMode { max, mass };

// A set of square co-occurrence matrices sharing one bin resolution.
class CoocStack {
 public:
  CoocStack() = default;
  CoocStack(std::vector<PairLabel> pairs, int bins);

  int bins() const { return bins_; }
  std::size_t pair_count() const { return pairs_.size(); }
  const std::vector<PairLabel>& pairs() const { return pairs_; }

  double* mat(std::size_t p) { return mats_[p].data(); }
  const double* mat(std::size_t p) const { return mats_[p].data(); }

  double& at(std::size_t p, int i, int j) {
    return mats_[p][static_cast<std::size_t>(i) * bins_ + j];
  }
  double at(std::size_t p, int i, int j) const {
    return mats_[p][static_cast<std::size_t>(i) * bins_ + j];
  }

  double mass(std::size_t p) const;  // sum of all entries of one matrix

  bool same_shape(const CoocStack& other) const;

 private:
  std::vector<PairLabel> pairs_;
  int bins_ = 0;
  std::vector<std::vector<double>> mats_;
};

// Hard-binned co-occurrence counts at 256 bins per axis. The image must be
// integer mode with values in {0..255}; each matrix M satisfies
// sum(M) == pair_count(geometry).
CoocStack cooc_discrete(const ImageBuffer& image, const PairGeometry& geometry);

// Per-matrix normalization: max divides by the largest entry, mass by the
// entry sum. All-zero matrices pass through unchanged.
CoocStack scale_cooc(const CoocStack& stack, ScaleMode mode);

// Binary format: magic "COOC", u16 version (1), u16 pair count; per pair a
// u8 geometry tag (0 horizontal, 1 diagonal, 2 cross_band), two u8 channel
// indices, u16 bins, then bins^2 little-endian f64 in row-major order.
void write_cooc(const CoocStack& stack, std::ostream& out);
CoocStack read_cooc(std::istream& in);
void write_cooc_file(const CoocStack& stack, const std::string& path);
CoocStack read_cooc_file(const std::string& path);

// i,j,value triples per matrix, zero entries omitted; matrices are
// separated by "# pair N: <geometry> <chA> <chB>" comment lines.
void write_cooc_csv(const CoocStack& stack, std::ostream& out);

}  // namespace coocmatch
