#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace csbp {

/// One non-zero of a {-1, 0, +1} matrix seen from a row (index = column) or
/// from a column (index = row).
struct SignedEntry {
  std::uint32_t index = 0;
  std::int8_t sign = 1;

  friend bool operator==(const SignedEntry&, const SignedEntry&) = default;
};

struct MatrixParams {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t l = 0;
  bool regular_columns = false;
  std::uint64_t seed = 0;

  void validate() const;
  /// L M / N; only meaningful when regular_columns holds.
  std::size_t column_weight() const noexcept { return n == 0 ? 0 : l * m / n; }
};

/// Sparse sign matrix with constant row weight, stored row-major with a
/// derived column-major transpose. Rows are sorted by column index.
class SparseSignMatrix {
 public:
  SparseSignMatrix() = default;

  /// Builds from explicit rows. Every row must hold exactly l distinct
  /// in-range columns with signs in {-1, +1}; throws ParameterError otherwise.
  /// m == 0 is allowed and denotes the empty measurement set.
  SparseSignMatrix(std::size_t n, std::size_t l, std::vector<std::vector<SignedEntry>> rows,
                   std::uint64_t seed = 0);

  std::size_t rows() const noexcept { return m_; }
  std::size_t cols() const noexcept { return n_; }
  std::size_t row_weight() const noexcept { return l_; }
  std::size_t nnz() const noexcept { return row_entries_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }

  std::span<const SignedEntry> row(std::size_t j) const noexcept {
    return {row_entries_.data() + j * l_, l_};
  }
  std::span<const SignedEntry> col(std::size_t i) const noexcept {
    return {col_entries_.data() + col_ptr_[i], col_ptr_[i + 1] - col_ptr_[i]};
  }
  std::size_t col_weight(std::size_t i) const noexcept { return col_ptr_[i + 1] - col_ptr_[i]; }

  /// The first m rows as a new matrix (progressive decoding).
  SparseSignMatrix prefix_rows(std::size_t m) const;

  /// Dense row-major expansion, m x n.
  std::vector<double> to_dense() const;

  friend bool operator==(const SparseSignMatrix& a, const SparseSignMatrix& b) {
    return a.m_ == b.m_ && a.n_ == b.n_ && a.l_ == b.l_ && a.seed_ == b.seed_ &&
           a.row_entries_ == b.row_entries_;
  }

 private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::size_t l_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<SignedEntry> row_entries_;  // m * l
  std::vector<std::size_t> col_ptr_{0};
  std::vector<SignedEntry> col_entries_;
};

/// Random CS-LDPC matrix. With regular_columns the edge set is built from
/// R = L M / N layers, each a random permutation of the N columns laid over
/// consecutive row slots; a layer that would duplicate a (row, col) pair is
/// redrawn. Otherwise each row samples L distinct columns uniformly. Signs are
/// iid uniform on {-1, +1}, drawn after the topology. Deterministic in seed.
SparseSignMatrix generate_matrix(const MatrixParams& params);

/// y = Phi x using only additions and subtractions.
std::vector<double> encode(const SparseSignMatrix& phi, std::span<const double> x);

/// Phi^T r.
std::vector<double> encode_transpose(const SparseSignMatrix& phi, std::span<const double> r);

struct RuleOfThumb {
  MatrixParams params;
  std::size_t r = 0;           ///< L M / N (rounded down when columns are irregular)
  bool m_exceeds_n = false;    ///< warning only
};

/// L = round(1/s), M = ceil(c_m s n log2 n), bumped up to a multiple of
/// n / gcd(L, n) when regular columns are requested. A nonzero l_override
/// replaces the L rule (the experiments use L = 2/s).
RuleOfThumb rule_of_thumb_params(std::size_t n, double s, double c_m, bool regular_columns,
                                 std::size_t l_override = 0, std::uint64_t seed = 0);

/// Text format: "csldpc v1 M N L seed", then one "row col sign" line per edge,
/// 0-based, rows ascending.
void write_matrix(std::ostream& os, const SparseSignMatrix& phi);
std::string serialize_matrix(const SparseSignMatrix& phi);

/// Throws ParseError naming the offending line.
SparseSignMatrix read_matrix(std::istream& is);
SparseSignMatrix parse_matrix(const std::string& text);

}  // namespace csbp
