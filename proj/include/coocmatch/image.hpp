#pragma once

#include <cstddef>
#include <vector>

namespace coocmatch {

enum class PixelMode { integer, real };

// H x W x C pixel array, row-major with interleaved channels (HWC).
// Integer mode holds whole values in {0..255}; real mode holds the
// continuous optimization iterate. Storage is double in both modes so a
// mode switch never copies or rounds anything by itself.
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(int height, int width, int channels, PixelMode mode);
  ImageBuffer(int height, int width, int channels, PixelMode mode,
              std::vector<double> data);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  PixelMode mode() const { return mode_; }
  std::size_t size() const { return data_.size(); }

  double& at(int y, int x, int c) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  double at(int y, int x, int c) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  // Throws std::invalid_argument when dims or pixel values break the mode's
  // contract. Construction does not validate; call this where a clean input
  // is required (file I/O, discrete counting).
  void validate() const;

  bool same_shape(const ImageBuffer& other) const {
    return height_ == other.height_ && width_ == other.width_ &&
           channels_ == other.channels_;
  }

  ImageBuffer to_real() const;

  // Nearest integer with ties to even, clamped to [0,255]; integer mode.
  ImageBuffer rounded() const;

 private:
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  PixelMode mode_ = PixelMode::integer;
  std::vector<double> data_;
};

}  // namespace coocmatch
