#pragma once

#include <complex>
#include <vector>

namespace coocmatch {

// 2D DFT of a row-major h*w complex array, any size. Forward is
// unnormalized; inverse includes the 1/(h*w) factor. Planning is guarded by
// a global lock so concurrent callers are safe.
void fft2d(std::vector<std::complex<double>>& a, int h, int w, bool inverse);

}  // namespace coocmatch
