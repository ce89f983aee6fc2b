#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fplab/grid.hpp"

namespace fplab {

/// FFTW-backed complex transforms for one grid shape. Plans are created once
/// per shape under a lock; execution is reentrant.
class SpectralTransform {
 public:
  static const SpectralTransform& for_grid(const Grid& grid);

  /// Unnormalized forward DFT of real samples.
  [[nodiscard]] std::vector<Complex> forward(std::span<const double> values) const;
  /// Inverse DFT divided by the number of points; returns the real part.
  [[nodiscard]] std::vector<double> inverse(std::vector<Complex> coeffs) const;

  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

 private:
  explicit SpectralTransform(const Grid& grid);
  Grid grid_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

}  // namespace fplab
