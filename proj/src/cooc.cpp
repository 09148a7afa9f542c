#include "coocmatch/cooc.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace coocmatch {

CoocStack::CoocStack(std::vector<PairLabel> pairs, int bins)
    : pairs_(std::move(pairs)), bins_(bins) {
  if (bins < 1) throw std::invalid_argument("CoocStack: bins must be >= 1");
  mats_.assign(pairs_.size(),
               std::vector<double>(static_cast<std::size_t>(bins) * bins, 0.0));
}

double CoocStack::mass(std::size_t p) const {
  double s = 0.0;
  for (double v : mats_[p]) s += v;
  return s;
}

bool CoocStack::same_shape(const CoocStack& other) const {
  if (bins_ != other.bins_ || pairs_.size() != other.pairs_.size())
    return false;
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    if (!(pairs_[p].geometry == other.pairs_[p].geometry) ||
        pairs_[p].channel_a != other.pairs_[p].channel_a ||
        pairs_[p].channel_b != other.pairs_[p].channel_b)
      return false;
  }
  return true;
}

CoocStack cooc_discrete(const ImageBuffer& image, const PairGeometry& geometry) {
  if (image.mode() != PixelMode::integer)
    throw std::invalid_argument("cooc_discrete: image must be integer mode");
  image.validate();
  check_geometry(geometry, image.height(), image.width(), image.channels());

  const int h = image.height(), w = image.width();
  CoocStack stack(expand_pairs(geometry, image.channels()), 256);

  for (std::size_t p = 0; p < stack.pair_count(); ++p) {
    const PairLabel& label = stack.pairs()[p];
    double* m = stack.mat(p);
    switch (label.geometry.kind) {
      case PairGeometry::Kind::horizontal:
        for (int y = 0; y < h; ++y)
          for (int x = 0; x + 1 < w; ++x) {
            int a = static_cast<int>(image.at(y, x, label.channel_a));
            int b = static_cast<int>(image.at(y, x + 1, label.channel_b));
            m[static_cast<std::size_t>(a) * 256 + b] += 1.0;
          }
        break;
      case PairGeometry::Kind::diagonal:
        for (int y = 0; y + 1 < h; ++y)
          for (int x = 0; x + 1 < w; ++x) {
            int a = static_cast<int>(image.at(y, x, label.channel_a));
            int b = static_cast<int>(image.at(y + 1, x + 1, label.channel_b));
            m[static_cast<std::size_t>(a) * 256 + b] += 1.0;
          }
        break;
      case PairGeometry::Kind::cross_band:
        for (int y = 0; y < h; ++y)
          for (int x = 0; x < w; ++x) {
            int a = static_cast<int>(image.at(y, x, label.channel_a));
            int b = static_cast<int>(image.at(y, x, label.channel_b));
            m[static_cast<std::size_t>(a) * 256 + b] += 1.0;
          }
        break;
    }
  }
  return stack;
}

CoocStack scale_cooc(const CoocStack& stack, ScaleMode mode) {
  CoocStack out = stack;
  const std::size_t n = static_cast<std::size_t>(stack.bins()) * stack.bins();
  for (std::size_t p = 0; p < out.pair_count(); ++p) {
    double* m = out.mat(p);
    double denom = 0.0;
    if (mode == ScaleMode::max) {
      for (std::size_t i = 0; i < n; ++i) denom = std::max(denom, m[i]);
    } else {
      for (std::size_t i = 0; i < n; ++i) denom += m[i];
    }
    if (denom > 0.0)
      for (std::size_t i = 0; i < n; ++i) m[i] /= denom;
  }
  return out;
}

namespace {

void put_u16(std::ostream& out, std::uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
  out.write(b, 2);
}

std::uint16_t get_u16(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

void put_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(b, 8);
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void write_cooc(const CoocStack& stack, std::ostream& out) {
  out.write("COOC", 4);
  put_u16(out, 1);
  put_u16(out, static_cast<std::uint16_t>(stack.pair_count()));
  for (std::size_t p = 0; p < stack.pair_count(); ++p) {
    const PairLabel& label = stack.pairs()[p];
    char head[3] = {static_cast<char>(label.geometry.kind),
                    static_cast<char>(label.channel_a),
                    static_cast<char>(label.channel_b)};
    out.write(head, 3);
    put_u16(out, static_cast<std::uint16_t>(stack.bins()));
    const double* m = stack.mat(p);
    const std::size_t n = static_cast<std::size_t>(stack.bins()) * stack.bins();
    for (std::size_t i = 0; i < n; ++i) put_f64(out, m[i]);
  }
}

CoocStack read_cooc(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "COOC", 4) != 0)
    throw std::runtime_error("read_cooc: bad magic");
  std::uint16_t version = get_u16(in);
  if (version != 1)
    throw std::runtime_error("read_cooc: unsupported version " +
                             std::to_string(version));
  std::uint16_t pairs = get_u16(in);

  std::vector<PairLabel> labels;
  std::vector<std::vector<double>> data;
  int bins = -1;
  for (std::uint16_t p = 0; p < pairs; ++p) {
    unsigned char head[3];
    in.read(reinterpret_cast<char*>(head), 3);
    if (head[0] > 2) throw std::runtime_error("read_cooc: bad geometry tag");
    PairLabel label;
    label.geometry.kind = static_cast<PairGeometry::Kind>(head[0]);
    label.channel_a = head[1];
    label.channel_b = head[2];
    if (label.geometry.kind == PairGeometry::Kind::cross_band) {
      label.geometry.band_a = head[1];
      label.geometry.band_b = head[2];
    }
    int b = get_u16(in);
    if (bins == -1) bins = b;
    if (b != bins || b < 1)
      throw std::runtime_error("read_cooc: inconsistent bin counts");
    std::vector<double> m(static_cast<std::size_t>(b) * b);
    for (auto& v : m) v = get_f64(in);
    if (!in) throw std::runtime_error("read_cooc: truncated stream");
    labels.push_back(label);
    data.push_back(std::move(m));
  }
  if (bins == -1) bins = 256;

  CoocStack stack(labels, bins);
  for (std::size_t p = 0; p < data.size(); ++p) {
    double* m = stack.mat(p);
    std::copy(data[p].begin(), data[p].end(), m);
  }
  return stack;
}

void write_cooc_file(const CoocStack& stack, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  write_cooc(stack, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

CoocStack read_cooc_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return read_cooc(in);
}

void write_cooc_csv(const CoocStack& stack, std::ostream& out) {
  out.precision(17);
  out << "i,j,value\n";
  for (std::size_t p = 0; p < stack.pair_count(); ++p) {
    const PairLabel& label = stack.pairs()[p];
    out << "# pair " << p << ": " << to_string(label.geometry) << " "
        << static_cast<int>(label.channel_a) << " "
        << static_cast<int>(label.channel_b) << "\n";
    for (int i = 0; i < stack.bins(); ++i)
      for (int j = 0; j < stack.bins(); ++j) {
        double v = stack.at(p, i, j);
        if (v != 0.0) out << i << "," << j << "," << v << "\n";
      }
  }
}

}  // namespace coocmatch
