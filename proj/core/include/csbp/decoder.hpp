#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csbp/csldpc.hpp"
#include "csbp/grid_pdf.hpp"
#include "csbp/signal_model.hpp"

namespace csbp {

enum class Codec { grid, mog };

std::string to_string(Codec codec);
/// "grid" or "mog"; throws ParameterError otherwise.
Codec parse_codec(const std::string& name);

struct DecoderConfig {
  Codec codec = Codec::grid;

  /// Explicit grid; when unset one is derived from the prior with
  /// delta = grid_delta_factor * sigma0 over +-grid_half_width_sigmas * sigma1.
  std::optional<Grid> grid;
  double grid_delta_factor = 0.5;
  double grid_half_width_sigmas = 6.0;

  /// Maximum mixture order for the mog codec.
  std::size_t m_comps = 6;

  /// Damping weight of new messages, constraint-to-variable and
  /// variable-to-constraint. 1 disables damping.
  double beta_con = 0.5;
  double beta_var = 0.5;

  /// 0 selects ceil(2 log2 N).
  std::size_t max_iters = 0;
  /// Stop once the largest per-edge L1 message change is at most tol.
  double tol = 1e-4;
  /// Halve the damping weights once if the message change grows for three
  /// consecutive iterations.
  bool divergence_guard = true;

  double sigma_z2 = 0.0;
  std::uint64_t seed = 0;

  void validate(const MixturePrior& prior) const;
  /// The grid this configuration decodes on for the given prior.
  Grid resolve_grid(const MixturePrior& prior) const;
  std::size_t resolve_max_iters(std::size_t n) const;
};

struct DecodeTelemetry {
  /// Largest per-edge L1 message change, one entry per iteration.
  std::vector<double> max_change;
  /// Constraint messages that lost more than 10% of their mass off the grid.
  std::size_t clipped_warnings = 0;
  /// Messages replaced because they degenerated (zero mass / non-finite).
  std::size_t degenerate_messages = 0;
  /// Iteration (1-based) at which the divergence guard halved the damping, 0 if never.
  std::size_t damping_halved_at = 0;
  double seconds = 0.0;
};

struct DecodeResult {
  std::vector<double> x_mmse;
  std::vector<double> x_map;
  /// Pr(Q(i) = 1 | y).
  std::vector<double> q_posterior;
  std::size_t iters_run = 0;
  bool converged = false;
  /// ||y - Phi x_mmse||_2.
  double residual_l2 = 0.0;
  DecodeTelemetry telemetry;
};

/// Damped flooding belief propagation over the factor graph of phi.
DecodeResult decode(const SparseSignMatrix& phi, std::span<const double> y,
                    const MixturePrior& prior, const DecoderConfig& cfg);

/// Decodes with the first m' rows for each m' in prefix_lengths (ascending, <= M).
std::vector<DecodeResult> progressive_decode(const SparseSignMatrix& phi,
                                             std::span<const double> y,
                                             std::span<const std::size_t> prefix_lengths,
                                             const MixturePrior& prior,
                                             const DecoderConfig& cfg);

}  // namespace csbp
