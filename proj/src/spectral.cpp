#include "fplab/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace fplab {

namespace {

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

SpectralTransform::SpectralTransform(const Grid& grid) : grid_(grid) {
  const int n = grid.points_per_axis();
  std::vector<Complex> a(grid.size());
  std::vector<Complex> b(grid.size());
  auto* in = reinterpret_cast<fftw_complex*>(a.data());
  auto* out = reinterpret_cast<fftw_complex*>(b.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  if (grid.dim() == 1) {
    forward_plan_ = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, flags);
    inverse_plan_ = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, flags);
  } else {
    // FFTW is row-major: the last index (x) varies fastest.
    forward_plan_ = fftw_plan_dft_2d(n, n, in, out, FFTW_FORWARD, flags);
    inverse_plan_ = fftw_plan_dft_2d(n, n, in, out, FFTW_BACKWARD, flags);
  }
  if (forward_plan_ == nullptr || inverse_plan_ == nullptr) throw std::runtime_error("FFTW planning failed");
}

SpectralTransform::~SpectralTransform() {
  std::lock_guard lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

const SpectralTransform& SpectralTransform::for_grid(const Grid& grid) {
  // The mutex must outlive the cache, so it is constructed first.
  std::mutex& mutex = plan_mutex();
  static std::map<std::pair<int, int>, std::unique_ptr<SpectralTransform>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{grid.dim(), grid.points_per_axis()}];
  if (!slot) slot.reset(new SpectralTransform(grid));
  return *slot;
}

std::vector<Complex> SpectralTransform::forward(std::span<const double> values) const {
  std::vector<Complex> in(values.begin(), values.end());
  std::vector<Complex> out(values.size());
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> SpectralTransform::inverse(std::vector<Complex> coeffs) const {
  std::vector<Complex> out(coeffs.size());
  fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), reinterpret_cast<fftw_complex*>(coeffs.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  std::vector<double> values(out.size());
  const double scale = 1.0 / static_cast<double>(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) values[i] = out[i].real() * scale;
  return values;
}

}  // namespace fplab
