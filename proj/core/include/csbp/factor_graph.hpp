#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "csbp/csldpc.hpp"

namespace csbp {

struct GraphEdge {
  std::uint32_t var = 0;
  std::uint32_t con = 0;
  std::int8_t sign = 1;
};

/// Bipartite coefficient/measurement graph of a sparse sign matrix. Edges are
/// stored row-major, so the edges of constraint j are the contiguous range
/// con_begin(j) .. con_end(j). Each variable keeps the list of its edge ids.
class FactorGraph {
 public:
  explicit FactorGraph(const SparseSignMatrix& phi);

  std::size_t n_var() const noexcept { return n_var_; }
  std::size_t n_con() const noexcept { return con_ptr_.size() - 1; }
  std::size_t n_edges() const noexcept { return edges_.size(); }

  std::span<const GraphEdge> edges() const noexcept { return edges_; }
  const GraphEdge& edge(std::size_t e) const noexcept { return edges_[e]; }

  std::size_t con_begin(std::size_t j) const noexcept { return con_ptr_[j]; }
  std::size_t con_end(std::size_t j) const noexcept { return con_ptr_[j + 1]; }
  std::size_t con_degree(std::size_t j) const noexcept { return con_ptr_[j + 1] - con_ptr_[j]; }

  std::span<const std::uint32_t> var_edges(std::size_t i) const noexcept {
    return {var_edge_ids_.data() + var_ptr_[i], var_ptr_[i + 1] - var_ptr_[i]};
  }

  /// Rebuilds the source matrix (row weight taken from the first constraint).
  SparseSignMatrix to_matrix() const;

 private:
  std::size_t n_var_ = 0;
  std::size_t row_weight_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<GraphEdge> edges_;
  std::vector<std::size_t> con_ptr_;
  std::vector<std::size_t> var_ptr_;
  std::vector<std::uint32_t> var_edge_ids_;
};

inline FactorGraph build_graph(const SparseSignMatrix& phi) { return FactorGraph(phi); }

}  // namespace csbp
