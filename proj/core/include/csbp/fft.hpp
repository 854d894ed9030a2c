#pragma once

#include <complex>
#include <cstddef>
#include <memory>

namespace csbp {

/// Smallest integer >= n whose only prime factors are 2, 3, 5, 7.
std::size_t next_fast_fft_size(std::size_t n);

/// Smallest odd integer >= n whose only prime factors are 3, 5, 7.
std::size_t next_odd_smooth(std::size_t n);

/// Real-to-complex FFT of a fixed length. Plans are shared per length and the
/// transforms are safe to call concurrently from several threads.
class RealFft {
 public:
  explicit RealFft(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

  /// in: size() reals, out: spectrum_size() bins.
  void forward(const double* in, std::complex<double>* out) const;

  /// Unnormalized inverse (result scaled by size()). Overwrites `in`.
  void inverse(std::complex<double>* in, double* out) const;

 private:
  struct Plans;
  std::size_t n_;
  std::shared_ptr<const Plans> plans_;
};

}  // namespace csbp
