#include "coocmatch/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace coocmatch {

namespace {
std::mutex plan_mutex;  // FFTW planning is not thread-safe
}

void fft2d(std::vector<std::complex<double>>& a, int h, int w, bool inverse) {
  if (h < 1 || w < 1 || a.size() != static_cast<std::size_t>(h) * w)
    throw std::invalid_argument("fft2d: size mismatch");
  fftw_complex* buf = reinterpret_cast<fftw_complex*>(a.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    plan = fftw_plan_dft_2d(h, w, buf, buf,
                            inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_destroy_plan(plan);
  }
  if (inverse) {
    double scale = 1.0 / (static_cast<double>(h) * w);
    for (auto& v : a) v *= scale;
  }
}

}  // namespace coocmatch
