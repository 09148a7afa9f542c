#pragma once

#include <string>

#include "coocmatch/image.hpp"

namespace coocmatch {

// 8-bit gray or RGB PNG -> integer-mode buffer. Palette expands to RGB,
// sub-8-bit gray expands to 8 bits, alpha is stripped. 16-bit files are
// rejected: downscaling would silently alter the pixel statistics all of
// the features here are computed from.
ImageBuffer load_png(const std::string& path);

// Integer-mode 1- or 3-channel buffer -> 8-bit PNG, written with fixed
// settings so identical buffers serialize byte-identically.
void save_png(const ImageBuffer& image, const std::string& path);

}  // namespace coocmatch
