#include "csbp/factor_graph.hpp"

namespace csbp {

FactorGraph::FactorGraph(const SparseSignMatrix& phi)
    : n_var_(phi.cols()), row_weight_(phi.row_weight()), seed_(phi.seed()) {
  edges_.reserve(phi.nnz());
  con_ptr_.reserve(phi.rows() + 1);
  con_ptr_.push_back(0);
  for (std::size_t j = 0; j < phi.rows(); ++j) {
    for (const auto& e : phi.row(j)) {
      edges_.push_back(GraphEdge{e.index, static_cast<std::uint32_t>(j), e.sign});
    }
    con_ptr_.push_back(edges_.size());
  }

  var_ptr_.assign(n_var_ + 1, 0);
  for (const auto& e : edges_) ++var_ptr_[e.var + 1];
  for (std::size_t i = 0; i < n_var_; ++i) var_ptr_[i + 1] += var_ptr_[i];
  var_edge_ids_.resize(edges_.size());
  std::vector<std::size_t> fill(var_ptr_.begin(), var_ptr_.end() - 1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    var_edge_ids_[fill[edges_[e].var]++] = static_cast<std::uint32_t>(e);
  }
}

SparseSignMatrix FactorGraph::to_matrix() const {
  std::vector<std::vector<SignedEntry>> rows(n_con());
  for (std::size_t j = 0; j < n_con(); ++j) {
    for (std::size_t e = con_begin(j); e < con_end(j); ++e) {
      rows[j].push_back(SignedEntry{edges_[e].var, edges_[e].sign});
    }
  }
  return SparseSignMatrix(n_var_, row_weight_, std::move(rows), seed_);
}

}  // namespace csbp
