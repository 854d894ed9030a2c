#include "csbp/csldpc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "csbp/error.hpp"
#include "csbp/rng.hpp"

namespace csbp {

void MatrixParams::validate() const {
  if (n == 0) throw ParameterError("matrix needs n >= 1 columns");
  if (m == 0) throw ParameterError("matrix needs m >= 1 rows");
  if (l == 0 || l > n) {
    throw ParameterError("row weight l must satisfy 1 <= l <= n (l=" + std::to_string(l) +
                         ", n=" + std::to_string(n) + ")");
  }
  if (n > std::numeric_limits<std::uint32_t>::max()) throw ParameterError("n too large");
  if (regular_columns && (l * m) % n != 0) {
    throw ParameterError("regular columns need l*m divisible by n (l=" + std::to_string(l) +
                         ", m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
  }
}

SparseSignMatrix::SparseSignMatrix(std::size_t n, std::size_t l,
                                   std::vector<std::vector<SignedEntry>> rows,
                                   std::uint64_t seed)
    : m_(rows.size()), n_(n), l_(l), seed_(seed) {
  if (n == 0) throw ParameterError("matrix needs n >= 1 columns");
  if (m_ > 0 && (l == 0 || l > n)) throw ParameterError("row weight must satisfy 1 <= l <= n");

  row_entries_.reserve(m_ * l_);
  std::vector<std::size_t> counts(n_, 0);
  for (std::size_t j = 0; j < m_; ++j) {
    auto& r = rows[j];
    if (r.size() != l_) {
      throw ParameterError("row " + std::to_string(j) + " has weight " +
                           std::to_string(r.size()) + ", expected " + std::to_string(l_));
    }
    std::sort(r.begin(), r.end(),
              [](const SignedEntry& a, const SignedEntry& b) { return a.index < b.index; });
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (r[k].index >= n_) throw ParameterError("column index out of range in row " + std::to_string(j));
      if (r[k].sign != 1 && r[k].sign != -1) throw ParameterError("signs must be +1 or -1");
      if (k > 0 && r[k].index == r[k - 1].index) {
        throw ParameterError("duplicate column " + std::to_string(r[k].index) + " in row " +
                             std::to_string(j));
      }
      ++counts[r[k].index];
      row_entries_.push_back(r[k]);
    }
  }

  col_ptr_.assign(n_ + 1, 0);
  for (std::size_t i = 0; i < n_; ++i) col_ptr_[i + 1] = col_ptr_[i] + counts[i];
  col_entries_.resize(row_entries_.size());
  std::vector<std::size_t> fill(col_ptr_.begin(), col_ptr_.end() - 1);
  for (std::size_t j = 0; j < m_; ++j) {
    for (const auto& e : row(j)) {
      col_entries_[fill[e.index]++] = SignedEntry{static_cast<std::uint32_t>(j), e.sign};
    }
  }
}

SparseSignMatrix SparseSignMatrix::prefix_rows(std::size_t m) const {
  if (m > m_) {
    throw ParameterError("prefix of " + std::to_string(m) + " rows exceeds M=" + std::to_string(m_));
  }
  std::vector<std::vector<SignedEntry>> rows(m);
  for (std::size_t j = 0; j < m; ++j) {
    auto r = row(j);
    rows[j].assign(r.begin(), r.end());
  }
  return SparseSignMatrix(n_, l_, std::move(rows), seed_);
}

std::vector<double> SparseSignMatrix::to_dense() const {
  std::vector<double> dense(m_ * n_, 0.0);
  for (std::size_t j = 0; j < m_; ++j) {
    for (const auto& e : row(j)) dense[j * n_ + e.index] = e.sign;
  }
  return dense;
}

namespace {

std::vector<std::vector<SignedEntry>> regular_topology(const MatrixParams& p, SplitMix64& rng) {
  const std::size_t layers = p.column_weight();
  std::vector<std::uint32_t> slot_col(p.m * p.l);
  std::vector<std::uint32_t> perm(p.n);
  constexpr int kMaxRedraws = 100000;

  for (std::size_t layer = 0; layer < layers; ++layer) {
    const std::size_t begin = layer * p.n;
    const std::size_t first_row = begin / p.l;
    const std::size_t row_start = first_row * p.l;  // earlier slots of a straddling row
    int attempt = 0;
    for (;; ++attempt) {
      if (attempt == kMaxRedraws) {
        throw ParameterError("could not draw a duplicate-free regular matrix");
      }
      std::iota(perm.begin(), perm.end(), 0u);
      std::shuffle(perm.begin(), perm.end(), rng);
      // Only the first row of a layer can straddle the previous layer.
      bool clash = false;
      const std::size_t straddle_end = std::min(begin + (p.l - (begin - row_start)), begin + p.n);
      for (std::size_t s = begin; s < straddle_end && !clash; ++s) {
        for (std::size_t t = row_start; t < begin; ++t) {
          if (slot_col[t] == perm[s - begin]) {
            clash = true;
            break;
          }
        }
      }
      if (!clash) break;
    }
    std::copy(perm.begin(), perm.end(), slot_col.begin() + static_cast<std::ptrdiff_t>(begin));
  }

  std::vector<std::vector<SignedEntry>> rows(p.m);
  for (std::size_t j = 0; j < p.m; ++j) {
    rows[j].resize(p.l);
    for (std::size_t k = 0; k < p.l; ++k) rows[j][k].index = slot_col[j * p.l + k];
  }
  return rows;
}

std::vector<std::vector<SignedEntry>> row_only_topology(const MatrixParams& p, SplitMix64& rng) {
  std::vector<std::vector<SignedEntry>> rows(p.m);
  std::vector<char> used(p.n, 0);
  for (std::size_t j = 0; j < p.m; ++j) {
    auto& r = rows[j];
    r.reserve(p.l);
    // Floyd's sampling of l distinct values from [0, n).
    for (std::size_t v = p.n - p.l; v < p.n; ++v) {
      std::uniform_int_distribution<std::size_t> pick(0, v);
      std::size_t t = pick(rng);
      if (used[t]) t = v;
      used[t] = 1;
      r.push_back(SignedEntry{static_cast<std::uint32_t>(t), 1});
    }
    for (const auto& e : r) used[e.index] = 0;
  }
  return rows;
}

}  // namespace

SparseSignMatrix generate_matrix(const MatrixParams& params) {
  params.validate();
  SplitMix64 root(params.seed);
  SplitMix64 topo = root.split(1);
  SplitMix64 signs = root.split(2);

  auto rows = params.regular_columns ? regular_topology(params, topo)
                                     : row_only_topology(params, topo);
  for (auto& r : rows) {
    std::sort(r.begin(), r.end(),
              [](const SignedEntry& a, const SignedEntry& b) { return a.index < b.index; });
    for (auto& e : r) e.sign = (signs() >> 63) ? std::int8_t{1} : std::int8_t{-1};
  }
  return SparseSignMatrix(params.n, params.l, std::move(rows), params.seed);
}

std::vector<double> encode(const SparseSignMatrix& phi, std::span<const double> x) {
  if (x.size() != phi.cols()) {
    throw ShapeError("encode: signal length " + std::to_string(x.size()) + " != N=" +
                     std::to_string(phi.cols()));
  }
  std::vector<double> y(phi.rows(), 0.0);
  for (std::size_t j = 0; j < phi.rows(); ++j) {
    double acc = 0.0;
    for (const auto& e : phi.row(j)) {
      if (e.sign > 0) {
        acc += x[e.index];
      } else {
        acc -= x[e.index];
      }
    }
    y[j] = acc;
  }
  return y;
}

std::vector<double> encode_transpose(const SparseSignMatrix& phi, std::span<const double> r) {
  if (r.size() != phi.rows()) throw ShapeError("encode_transpose: length mismatch");
  std::vector<double> out(phi.cols(), 0.0);
  for (std::size_t j = 0; j < phi.rows(); ++j) {
    for (const auto& e : phi.row(j)) out[e.index] += e.sign > 0 ? r[j] : -r[j];
  }
  return out;
}

RuleOfThumb rule_of_thumb_params(std::size_t n, double s, double c_m, bool regular_columns,
                                 std::size_t l_override, std::uint64_t seed) {
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("rule of thumb needs 0 < s < 1");
  if (n < 2) throw ParameterError("rule of thumb needs n >= 2");
  if (!(c_m > 0.0)) throw ParameterError("rule of thumb needs c_m > 0");

  RuleOfThumb out;
  auto& p = out.params;
  p.n = n;
  p.seed = seed;
  p.regular_columns = regular_columns;
  p.l = l_override != 0 ? l_override : static_cast<std::size_t>(std::llround(1.0 / s));
  p.l = std::clamp<std::size_t>(p.l, 1, n);
  const double m_real = c_m * s * static_cast<double>(n) * std::log2(static_cast<double>(n));
  p.m = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(m_real - 1e-9)));
  if (regular_columns) {
    const std::size_t step = n / std::gcd(p.l, n);
    p.m = (p.m + step - 1) / step * step;
  }
  out.r = p.l * p.m / n;
  out.m_exceeds_n = p.m > n;
  return out;
}

void write_matrix(std::ostream& os, const SparseSignMatrix& phi) {
  os << "csldpc v1 " << phi.rows() << ' ' << phi.cols() << ' ' << phi.row_weight() << ' '
     << phi.seed() << '\n';
  for (std::size_t j = 0; j < phi.rows(); ++j) {
    for (const auto& e : phi.row(j)) {
      os << j << ' ' << e.index << ' ' << static_cast<int>(e.sign) << '\n';
    }
  }
}

std::string serialize_matrix(const SparseSignMatrix& phi) {
  std::ostringstream os;
  write_matrix(os, phi);
  return os.str();
}

namespace {

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

SparseSignMatrix read_matrix(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(is, line)) throw ParseError(1, "missing header");
  ++lineno;
  const auto head = split_ws(line);
  std::size_t m = 0, n = 0, l = 0;
  std::uint64_t seed = 0;
  if (head.size() != 6 || head[0] != "csldpc" || head[1] != "v1" || !parse_number(head[2], m) ||
      !parse_number(head[3], n) || !parse_number(head[4], l) || !parse_number(head[5], seed)) {
    throw ParseError(lineno, "malformed header, expected 'csldpc v1 M N L seed'");
  }
  if (m == 0) throw ParseError(lineno, "header declares M=0");
  if (n == 0) throw ParseError(lineno, "header declares N=0");
  if (l == 0 || l > n) throw ParseError(lineno, "header row weight L must satisfy 1 <= L <= N");

  std::vector<std::vector<SignedEntry>> rows(m);
  std::size_t prev_row = 0;
  std::size_t edges = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    std::size_t r = 0, c = 0;
    int sign = 0;
    if (tok.size() != 3 || !parse_number(tok[0], r) || !parse_number(tok[1], c) ||
        !parse_number(tok[2], sign)) {
      throw ParseError(lineno, "malformed edge record, expected 'row col sign'");
    }
    if (r >= m) throw ParseError(lineno, "row index " + std::to_string(r) + " out of range");
    if (c >= n) throw ParseError(lineno, "column index " + std::to_string(c) + " out of range");
    if (sign != 1 && sign != -1) throw ParseError(lineno, "sign must be +1 or -1");
    if (r < prev_row) throw ParseError(lineno, "rows must be in ascending order");
    if (r != prev_row && rows[prev_row].size() != l) {
      throw ParseError(lineno, "row " + std::to_string(prev_row) + " has weight " +
                                   std::to_string(rows[prev_row].size()) + ", expected " +
                                   std::to_string(l));
    }
    prev_row = r;
    for (const auto& e : rows[r]) {
      if (e.index == c) {
        throw ParseError(lineno, "duplicate edge (" + std::to_string(r) + ", " +
                                     std::to_string(c) + ")");
      }
    }
    if (rows[r].size() == l) throw ParseError(lineno, "row " + std::to_string(r) + " exceeds weight L");
    rows[r].push_back(SignedEntry{static_cast<std::uint32_t>(c), static_cast<std::int8_t>(sign)});
    ++edges;
  }
  if (edges != m * l) {
    throw ParseError(lineno, "expected " + std::to_string(m * l) + " edge records, found " +
                                 std::to_string(edges));
  }
  return SparseSignMatrix(n, l, std::move(rows), seed);
}

SparseSignMatrix parse_matrix(const std::string& text) {
  std::istringstream is(text);
  return read_matrix(is);
}

}  // namespace csbp
