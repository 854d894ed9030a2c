#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "csbp/signal_model.hpp"

namespace csbp {

/// Uniform grid symmetric about 0: point k sits at (k - (p-1)/2) * delta.
class Grid {
 public:
  Grid() = default;
  /// Throws ParameterError unless p is odd and delta > 0.
  Grid(std::size_t p, double delta);

  /// delta = delta_factor * sigma0, half-width = half_width_sigmas * sigma1,
  /// p = smallest odd 3-5-7-smooth count covering the half-width.
  static Grid for_prior(const MixturePrior& prior, double delta_factor = 0.5,
                        double half_width_sigmas = 6.0);

  /// p = 525 = 3 * 5^2 * 7 spanning +-half_width_sigmas * sigma1.
  static Grid preset_525(const MixturePrior& prior, double half_width_sigmas = 6.0);

  std::size_t size() const noexcept { return p_; }
  double delta() const noexcept { return delta_; }
  std::size_t center() const noexcept { return p_ / 2; }
  double half_width() const noexcept { return static_cast<double>(p_ / 2) * delta_; }
  double point(std::size_t k) const noexcept {
    return (static_cast<double>(k) - static_cast<double>(p_ / 2)) * delta_;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t p_ = 1;
  double delta_ = 1.0;
};

struct GridMoments {
  double mean = 0.0;
  double var = 0.0;
  double argmax = 0.0;
};

/// Density sampled on a Grid, normalized so that sum(values) * delta == 1.
class GridPdf {
 public:
  /// Validates (finite, nonnegative, positive mass) and normalizes.
  /// Throws DegenerateMessageError on zero mass or non-finite values.
  GridPdf(const Grid& grid, std::vector<double> values);

  static GridPdf from_gaussian(const Grid& grid, double mean, double var);
  /// s-weighted sum of N(0, sigma1^2) and N(0, sigma0^2); s may be 0 or 1 here.
  static GridPdf from_prior(const Grid& grid, const MixturePrior& prior);
  static GridPdf uniform(const Grid& grid);
  /// Unit mass on the grid point offset_bins away from the center.
  static GridPdf spike(const Grid& grid, std::ptrdiff_t offset_bins);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }

  /// sum |a - b| * delta.
  double l1_distance(const GridPdf& other) const;

  /// Mean, variance, and grid argmax. Ties resolve to the smallest |t|,
  /// then the negative point.
  GridMoments moments() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// A result together with the probability mass that fell off the grid.
struct ClippedPdf {
  GridPdf pdf;
  double clipped_mass = 0.0;

  bool overflow_warning() const noexcept { return clipped_mass > 0.1; }
};

/// Pointwise product, renormalized. Throws DegenerateMessageError when the
/// product has no mass.
GridPdf multiply(const GridPdf& a, const GridPdf& b);

/// Linear (acyclic) convolution via zero-padded FFT, truncated to the grid
/// and renormalized.
ClippedPdf convolve(const GridPdf& a, const GridPdf& b);

/// Mirror image about the center point.
GridPdf reflect(const GridPdf& a);

/// Density translated by t (result(x) = a(x - t)), linear interpolation.
ClippedPdf shift(const GridPdf& a, double t);

/// Sets every value below rel_floor * max to rel_floor * max, renormalized.
GridPdf clamp_floor(const GridPdf& a, double rel_floor = 1e-12);

}  // namespace csbp
