#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace coocmatch {

// Pixel-pair geometry for co-occurrence counting.
//   horizontal: (x[k][l], x[k][l+1]) within each channel
//   diagonal:   (x[k][l], x[k+1][l+1]) within each channel
//   cross_band: co-located values of two different channels
struct PairGeometry {
  enum class Kind : std::uint8_t { horizontal = 0, diagonal = 1, cross_band = 2 };

  Kind kind = Kind::horizontal;
  std::uint8_t band_a = 0;  // cross_band only
  std::uint8_t band_b = 1;

  static PairGeometry horizontal() { return {Kind::horizontal, 0, 0}; }
  static PairGeometry diagonal() { return {Kind::diagonal, 0, 0}; }
  static PairGeometry cross_band(int a, int b) {
    return {Kind::cross_band, static_cast<std::uint8_t>(a),
            static_cast<std::uint8_t>(b)};
  }

  bool operator==(const PairGeometry& o) const {
    if (kind != o.kind) return false;
    if (kind != Kind::cross_band) return true;
    return band_a == o.band_a && band_b == o.band_b;
  }
};

// One co-occurrence matrix: the geometry plus the channels it reads.
// Horizontal/diagonal set channel_a == channel_b; cross_band uses its bands.
struct PairLabel {
  PairGeometry geometry;
  std::uint8_t channel_a = 0;
  std::uint8_t channel_b = 0;
};

// Throws std::invalid_argument when the geometry cannot be applied to an
// image of the given shape.
void check_geometry(const PairGeometry& g, int height, int width, int channels);

// Number of pixel pairs one matrix of this geometry accumulates.
std::int64_t pair_count(const PairGeometry& g, int height, int width);

// Horizontal/diagonal expand to one matrix per channel; cross_band to one.
std::vector<PairLabel> expand_pairs(const PairGeometry& g, int channels);
std::vector<PairLabel> expand_pairs(const std::vector<PairGeometry>& gs,
                                    int channels);

// The three distinct channel pairs plus the per-channel diagonal: six
// matrices for an RGB image. Used by the cross-band detector variant.
std::vector<PairGeometry> cross_band_feature_set();

std::string to_string(const PairGeometry& g);

// "horizontal" | "diagonal" | "crossband:A,B"
PairGeometry parse_geometry(const std::string& s);

}  // namespace coocmatch
