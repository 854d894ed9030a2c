#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace csbp {

struct Gaussian {
  double weight = 1.0;
  double mean = 0.0;
  double var = 1.0;
};

/// Weighted list of 1-D Gaussians with weights summing to 1.
class GaussMixture {
 public:
  GaussMixture() = default;
  /// Validates (w > 0, var > 0, finite) and renormalizes the weights.
  explicit GaussMixture(std::vector<Gaussian> comps);

  static GaussMixture single(double mean, double var) {
    return GaussMixture({Gaussian{1.0, mean, var}});
  }

  std::size_t size() const noexcept { return comps_.size(); }
  std::span<const Gaussian> components() const noexcept { return comps_; }
  const Gaussian& operator[](std::size_t i) const noexcept { return comps_[i]; }

  double density(double x) const;
  double mean() const;
  /// E[X^2] about zero.
  double second_moment() const;
  double variance() const;

 private:
  std::vector<Gaussian> comps_;
};

/// N(x; mean, var).
double normal_density(double x, double mean, double var);

/// Hellinger distance between the unit-mass Gaussians a and b, in [0, 1].
double hellinger(const Gaussian& a, const Gaussian& b);

/// Moment-matched merge of two components (weights are not normalized).
Gaussian merge_moments(const Gaussian& a, const Gaussian& b);

/// All |a| |b| pairwise products, renormalized. Not reduced.
/// Throws DegenerateMessageError if the total weight underflows.
GaussMixture mix_multiply(const GaussMixture& a, const GaussMixture& b);

/// Density of the sum of independent draws: all pairwise convolutions.
GaussMixture mix_convolve(const GaussMixture& a, const GaussMixture& b);

/// Density of sign * X + offset for sign in {-1, +1}.
GaussMixture mix_affine(const GaussMixture& a, int sign, double offset);

/// Convex combination beta * a + (1 - beta) * b as a concatenated mixture.
GaussMixture mix_blend(const GaussMixture& a, const GaussMixture& b, double beta);

/// Iterative pairwise replacement: while more than m components remain, merge
/// the pair with the smallest Hellinger distance by moment matching.
/// Total weight, mean, and second moment are preserved.
GaussMixture reduce_ipra(const GaussMixture& a, std::size_t m);

struct MixMoments {
  double mean = 0.0;
  double var = 0.0;
  double argmax = 0.0;
};

/// Closed-form mean and variance; argmax by dense evaluation on a grid of the
/// given spacing over [-half_width, half_width]. Ties go to the smallest |x|.
MixMoments mix_moments(const GaussMixture& a, double delta, double half_width);

}  // namespace csbp
