#include "coocmatch/image.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace coocmatch {

ImageBuffer::ImageBuffer(int height, int width, int channels, PixelMode mode)
    : height_(height),
      width_(width),
      channels_(channels),
      mode_(mode),
      data_(static_cast<std::size_t>(height < 0 ? 0 : height) *
                (width < 0 ? 0 : width) * (channels < 0 ? 0 : channels),
            0.0) {
  if (height < 1 || width < 1)
    throw std::invalid_argument("ImageBuffer: dimensions must be >= 1");
  if (channels != 1 && channels != 3)
    throw std::invalid_argument("ImageBuffer: channel count must be 1 or 3");
}

ImageBuffer::ImageBuffer(int height, int width, int channels, PixelMode mode,
                         std::vector<double> data)
    : ImageBuffer(height, width, channels, mode) {
  if (data.size() != data_.size())
    throw std::invalid_argument("ImageBuffer: data size does not match dims");
  data_ = std::move(data);
}

void ImageBuffer::validate() const {
  if (height_ < 1 || width_ < 1)
    throw std::invalid_argument("ImageBuffer: dimensions must be >= 1");
  for (double v : data_) {
    if (!(v >= 0.0 && v <= 255.0))
      throw std::invalid_argument("ImageBuffer: pixel value " +
                                  std::to_string(v) + " outside [0,255]");
    if (mode_ == PixelMode::integer && v != std::floor(v))
      throw std::invalid_argument("ImageBuffer: non-integral value " +
                                  std::to_string(v) + " in integer mode");
  }
}

ImageBuffer ImageBuffer::to_real() const {
  ImageBuffer out = *this;
  out.mode_ = PixelMode::real;
  return out;
}

ImageBuffer ImageBuffer::rounded() const {
  ImageBuffer out(height_, width_, channels_, PixelMode::integer);
  for (std::size_t i = 0; i < data_.size(); ++i) {
    double v = std::nearbyint(data_[i]);  // default FP mode: ties to even
    if (v < 0.0) v = 0.0;
    if (v > 255.0) v = 255.0;
    out.data_[i] = v;
  }
  return out;
}

}  // namespace coocmatch
