#include "csbp/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

#include "csbp/error.hpp"

namespace csbp {

namespace {

bool has_only_factors(std::size_t n, std::initializer_list<std::size_t> primes) {
  if (n == 0) return false;
  for (std::size_t p : primes) {
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::size_t next_fast_fft_size(std::size_t n) {
  if (n <= 1) return 1;
  while (!has_only_factors(n, {2, 3, 5, 7})) ++n;
  return n;
}

std::size_t next_odd_smooth(std::size_t n) {
  if (n <= 1) return 1;
  if (n % 2 == 0) ++n;
  while (!has_only_factors(n, {3, 5, 7})) n += 2;
  return n;
}

struct RealFft::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n == 0) throw ParameterError("FFT length must be positive");

  // FFTW's planner is not thread-safe; execution with new arrays is.
  std::lock_guard lock(planner_mutex());
  static std::map<std::size_t, std::shared_ptr<const Plans>> cache;
  if (auto it = cache.find(n); it != cache.end()) {
    plans_ = it->second;
    return;
  }
  std::vector<double> real(n);
  std::vector<std::complex<double>> spec(n / 2 + 1);
  auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
  auto plans = std::make_shared<Plans>();
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans->r2c = fftw_plan_dft_r2c_1d(static_cast<int>(n), real.data(), cplx, flags);
  plans->c2r = fftw_plan_dft_c2r_1d(static_cast<int>(n), cplx, real.data(), flags);
  if (!plans->r2c || !plans->c2r) throw NumericError("FFTW planning failed");
  plans_ = plans;
  cache.emplace(n, plans_);
}

void RealFft::forward(const double* in, std::complex<double>* out) const {
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void RealFft::inverse(std::complex<double>* in, double* out) const {
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(in), out);
}

}  // namespace csbp
