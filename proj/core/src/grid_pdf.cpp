#include "csbp/grid_pdf.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "csbp/error.hpp"
#include "csbp/fft.hpp"

namespace csbp {

Grid::Grid(std::size_t p, double delta) : p_(p), delta_(delta) {
  if (p == 0 || p % 2 == 0) throw ParameterError("grid size p must be odd, got " + std::to_string(p));
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ParameterError("grid spacing must be > 0");
}

Grid Grid::for_prior(const MixturePrior& prior, double delta_factor, double half_width_sigmas) {
  if (!(delta_factor > 0.0) || !(half_width_sigmas > 0.0)) {
    throw ParameterError("grid factors must be positive");
  }
  const double delta = delta_factor * prior.sigma0;
  const double half = half_width_sigmas * prior.sigma1;
  const auto span_bins = static_cast<std::size_t>(std::ceil(2.0 * half / delta - 1e-9));
  return Grid(next_odd_smooth(span_bins + 1), delta);
}

Grid Grid::preset_525(const MixturePrior& prior, double half_width_sigmas) {
  constexpr std::size_t p = 525;
  return Grid(p, 2.0 * half_width_sigmas * prior.sigma1 / static_cast<double>(p - 1));
}

namespace {

double normalize_in_place(std::vector<double>& v, double delta) {
  double sum = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) throw DegenerateMessageError("density has non-finite values");
    sum += x;
  }
  const double mass = sum * delta;
  if (!(mass > 0.0)) throw DegenerateMessageError("density has zero mass");
  const double inv = 1.0 / mass;
  for (double& x : v) x *= inv;
  return mass;
}

void require_same_grid(const GridPdf& a, const GridPdf& b, const char* op) {
  if (!(a.grid() == b.grid())) throw ShapeError(std::string(op) + ": operands use different grids");
}

}  // namespace

GridPdf::GridPdf(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw ShapeError("density length does not match grid");
  for (double x : values_) {
    if (x < 0.0) throw ParameterError("density values must be nonnegative");
  }
  normalize_in_place(values_, grid_.delta());
}

GridPdf GridPdf::from_gaussian(const Grid& grid, double mean, double var) {
  if (!(var > 0.0) || !std::isfinite(var)) throw ParameterError("variance must be positive");
  if (!(std::abs(mean) <= grid.half_width())) {
    throw RangeError("mean " + std::to_string(mean) + " outside grid range");
  }
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double d = grid.point(k) - mean;
    v[k] = std::exp(-0.5 * d * d / var);
  }
  return GridPdf(grid, std::move(v));
}

GridPdf GridPdf::from_prior(const Grid& grid, const MixturePrior& prior) {
  if (!(prior.s >= 0.0 && prior.s <= 1.0)) throw ParameterError("mixture weight must lie in [0, 1]");
  if (!(prior.sigma0 > 0.0 && prior.sigma1 > 0.0)) throw ParameterError("std-devs must be positive");
  const double v0 = prior.sigma0 * prior.sigma0;
  const double v1 = prior.sigma1 * prior.sigma1;
  // Each component is normalized on the grid before mixing, so the degenerate
  // weights reproduce from_gaussian exactly.
  std::vector<double> g0(grid.size()), g1(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid.point(k);
    g0[k] = std::exp(-0.5 * t * t / v0);
    g1[k] = std::exp(-0.5 * t * t / v1);
  }
  normalize_in_place(g0, grid.delta());
  normalize_in_place(g1, grid.delta());
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = prior.s * g1[k] + (1.0 - prior.s) * g0[k];
  return GridPdf(grid, std::move(v));
}

GridPdf GridPdf::uniform(const Grid& grid) {
  return GridPdf(grid, std::vector<double>(grid.size(), 1.0));
}

GridPdf GridPdf::spike(const Grid& grid, std::ptrdiff_t offset_bins) {
  const auto idx = static_cast<std::ptrdiff_t>(grid.center()) + offset_bins;
  if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(grid.size())) {
    throw RangeError("spike offset outside grid");
  }
  std::vector<double> v(grid.size(), 0.0);
  v[static_cast<std::size_t>(idx)] = 1.0;
  return GridPdf(grid, std::move(v));
}

double GridPdf::l1_distance(const GridPdf& other) const {
  require_same_grid(*this, other, "l1_distance");
  double acc = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) acc += std::abs(values_[k] - other.values_[k]);
  return acc * grid_.delta();
}

GridMoments GridPdf::moments() const {
  const double delta = grid_.delta();
  GridMoments m;
  for (std::size_t k = 0; k < values_.size(); ++k) m.mean += grid_.point(k) * values_[k];
  m.mean *= delta;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double d = grid_.point(k) - m.mean;
    m.var += d * d * values_[k];
  }
  m.var *= delta;

  // Walk outward from the center, negative side first, so the first maximum
  // found has the smallest magnitude.
  const std::size_t c = grid_.center();
  std::size_t best = c;
  for (std::size_t r = 1; r <= c; ++r) {
    if (values_[c - r] > values_[best]) best = c - r;
    if (values_[c + r] > values_[best]) best = c + r;
  }
  m.argmax = grid_.point(best);
  return m;
}

GridPdf multiply(const GridPdf& a, const GridPdf& b) {
  require_same_grid(a, b, "multiply");
  std::vector<double> v(a.grid().size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[k] * b[k];
  return GridPdf(a.grid(), std::move(v));
}

ClippedPdf convolve(const GridPdf& a, const GridPdf& b) {
  require_same_grid(a, b, "convolve");
  const Grid& grid = a.grid();
  const std::size_t p = grid.size();
  const std::size_t c = grid.center();
  const std::size_t n = next_fast_fft_size(2 * p - 1);
  RealFft fft(n);

  std::vector<double> buf(n, 0.0);
  std::vector<std::complex<double>> fa(fft.spectrum_size()), fb(fft.spectrum_size());
  std::copy(a.values().begin(), a.values().end(), buf.begin());
  fft.forward(buf.data(), fa.data());
  std::fill(buf.begin(), buf.end(), 0.0);
  std::copy(b.values().begin(), b.values().end(), buf.begin());
  fft.forward(buf.data(), fb.data());
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  fft.inverse(fa.data(), buf.data());

  // Full index m holds the point (m - 2c) delta; grid index k = m - c.
  const double scale = grid.delta() / static_cast<double>(n);
  std::vector<double> v(p);
  double kept = 0.0;
  for (std::size_t k = 0; k < p; ++k) {
    v[k] = std::max(0.0, buf[k + c] * scale);
    kept += v[k];
  }
  const double clipped = std::max(0.0, 1.0 - kept * grid.delta());
  return ClippedPdf{GridPdf(grid, std::move(v)), clipped};
}

GridPdf reflect(const GridPdf& a) {
  std::vector<double> v(a.values().rbegin(), a.values().rend());
  return GridPdf(a.grid(), std::move(v));
}

ClippedPdf shift(const GridPdf& a, double t) {
  const Grid& grid = a.grid();
  const std::size_t p = grid.size();
  const double bins = t / grid.delta();
  double whole = std::floor(bins);
  double frac = bins - whole;
  if (frac > 1.0 - 1e-9) {
    whole += 1.0;
    frac = 0.0;
  } else if (frac < 1e-9) {
    frac = 0.0;
  }
  const auto off = static_cast<std::ptrdiff_t>(whole);
  auto at = [&](std::ptrdiff_t i) {
    return (i >= 0 && i < static_cast<std::ptrdiff_t>(p)) ? a[static_cast<std::size_t>(i)] : 0.0;
  };
  // result(x_k) = a(x_k - t): source position k - off - frac.
  std::vector<double> v(p);
  double kept = 0.0;
  for (std::size_t k = 0; k < p; ++k) {
    const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(k) - off;
    v[k] = frac == 0.0 ? at(src) : (1.0 - frac) * at(src) + frac * at(src - 1);
    kept += v[k];
  }
  const double clipped = std::max(0.0, 1.0 - kept * grid.delta());
  if (!(kept > 0.0)) throw DegenerateMessageError("shift moved all mass off the grid");
  return ClippedPdf{GridPdf(grid, std::move(v)), clipped};
}

GridPdf clamp_floor(const GridPdf& a, double rel_floor) {
  const double peak = *std::max_element(a.values().begin(), a.values().end());
  const double floor = rel_floor * peak;
  std::vector<double> v(a.values().begin(), a.values().end());
  for (double& x : v) x = std::max(x, floor);
  return GridPdf(a.grid(), std::move(v));
}

}  // namespace csbp
