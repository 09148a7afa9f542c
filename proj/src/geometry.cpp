#include "coocmatch/geometry.hpp"

#include <stdexcept>

namespace coocmatch {

void check_geometry(const PairGeometry& g, int height, int width,
                    int channels) {
  switch (g.kind) {
    case PairGeometry::Kind::horizontal:
      if (width < 2)
        throw std::invalid_argument("horizontal pairs need width >= 2");
      break;
    case PairGeometry::Kind::diagonal:
      if (height < 2 || width < 2)
        throw std::invalid_argument("diagonal pairs need height and width >= 2");
      break;
    case PairGeometry::Kind::cross_band:
      if (channels < 2)
        throw std::invalid_argument("cross_band pairs need >= 2 channels");
      if (g.band_a == g.band_b)
        throw std::invalid_argument("cross_band needs two distinct bands");
      if (g.band_a >= channels || g.band_b >= channels)
        throw std::invalid_argument("cross_band band index out of range");
      break;
  }
}

std::int64_t pair_count(const PairGeometry& g, int height, int width) {
  switch (g.kind) {
    case PairGeometry::Kind::horizontal:
      return static_cast<std::int64_t>(height) * (width - 1);
    case PairGeometry::Kind::diagonal:
      return static_cast<std::int64_t>(height - 1) * (width - 1);
    case PairGeometry::Kind::cross_band:
      return static_cast<std::int64_t>(height) * width;
  }
  return 0;
}

std::vector<PairLabel> expand_pairs(const PairGeometry& g, int channels) {
  std::vector<PairLabel> out;
  if (g.kind == PairGeometry::Kind::cross_band) {
    out.push_back({g, g.band_a, g.band_b});
  } else {
    for (int c = 0; c < channels; ++c)
      out.push_back({g, static_cast<std::uint8_t>(c),
                     static_cast<std::uint8_t>(c)});
  }
  return out;
}

std::vector<PairLabel> expand_pairs(const std::vector<PairGeometry>& gs,
                                    int channels) {
  std::vector<PairLabel> out;
  for (const auto& g : gs) {
    auto part = expand_pairs(g, channels);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<PairGeometry> cross_band_feature_set() {
  return {PairGeometry::cross_band(0, 1), PairGeometry::cross_band(0, 2),
          PairGeometry::cross_band(1, 2), PairGeometry::diagonal()};
}

std::string to_string(const PairGeometry& g) {
  switch (g.kind) {
    case PairGeometry::Kind::horizontal:
      return "horizontal";
    case PairGeometry::Kind::diagonal:
      return "diagonal";
    case PairGeometry::Kind::cross_band:
      return "crossband:" + std::to_string(g.band_a) + "," +
             std::to_string(g.band_b);
  }
  return "?";
}

PairGeometry parse_geometry(const std::string& s) {
  if (s == "horizontal") return PairGeometry::horizontal();
  if (s == "diagonal") return PairGeometry::diagonal();
  if (s.rfind("crossband:", 0) == 0) {
    std::string rest = s.substr(10);
    auto comma = rest.find(',');
    if (comma != std::string::npos) {
      int a = std::stoi(rest.substr(0, comma));
      int b = std::stoi(rest.substr(comma + 1));
      if (a >= 0 && b >= 0 && a < 256 && b < 256)
        return PairGeometry::cross_band(a, b);
    }
  }
  throw std::invalid_argument("unknown geometry: " + s);
}

}  // namespace coocmatch
