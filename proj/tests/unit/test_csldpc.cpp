#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "csbp/csldpc.hpp"
#include "csbp/error.hpp"
#include "csbp/factor_graph.hpp"
#include "reference.hpp"

using namespace csbp;

namespace {

MatrixParams params(std::size_t n, std::size_t m, std::size_t l, bool regular, std::uint64_t seed) {
  MatrixParams p;
  p.n = n;
  p.m = m;
  p.l = l;
  p.regular_columns = regular;
  p.seed = seed;
  return p;
}

void expect_structure(const SparseSignMatrix& phi) {
  std::set<std::tuple<std::size_t, std::size_t, int>> from_rows, from_cols;
  for (std::size_t j = 0; j < phi.rows(); ++j) {
    ASSERT_EQ(phi.row(j).size(), phi.row_weight());
    std::set<std::uint32_t> distinct;
    for (const auto& e : phi.row(j)) {
      ASSERT_TRUE(e.sign == 1 || e.sign == -1);
      ASSERT_LT(e.index, phi.cols());
      distinct.insert(e.index);
      from_rows.insert({j, e.index, e.sign});
    }
    ASSERT_EQ(distinct.size(), phi.row_weight());
  }
  for (std::size_t i = 0; i < phi.cols(); ++i) {
    for (const auto& e : phi.col(i)) from_cols.insert({e.index, i, e.sign});
  }
  EXPECT_EQ(from_rows, from_cols);
}

}  // namespace

TEST(Csldpc, RegularColumnsHaveExactWeight) {
  const auto phi = generate_matrix(params(1000, 400, 20, true, 3));
  expect_structure(phi);
  for (std::size_t i = 0; i < phi.cols(); ++i) ASSERT_EQ(phi.col_weight(i), 8u);
}

TEST(Csldpc, DenseRowsAreSignedPermutations) {
  const auto phi = generate_matrix(params(4, 2, 4, true, 1));
  expect_structure(phi);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(phi.col_weight(i), 2u);
}

TEST(Csldpc, IrregularRowsKeepRowWeight) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) expect_structure(generate_matrix(params(200, 80, 10, false, seed)));
}

TEST(Csldpc, Deterministic) {
  const auto a = generate_matrix(params(500, 200, 20, true, 9));
  EXPECT_EQ(a, generate_matrix(params(500, 200, 20, true, 9)));
  EXPECT_FALSE(a == generate_matrix(params(500, 200, 20, true, 10)));
}

TEST(Csldpc, ParameterErrors) {
  EXPECT_THROW(generate_matrix(params(10, 3, 4, true, 0)), ParameterError);  // 12 % 10 != 0
  EXPECT_THROW(generate_matrix(params(10, 3, 11, false, 0)), ParameterError);
}

TEST(Csldpc, EncodeZeroAndOnes) {
  const auto phi = generate_matrix(params(50, 20, 5, false, 4));
  EXPECT_EQ(encode(phi, std::vector<double>(50, 0.0)), std::vector<double>(20, 0.0));
  const auto y = encode(phi, std::vector<double>(50, 1.0));
  for (std::size_t j = 0; j < 20; ++j) {
    int count = 0;
    for (const auto& e : phi.row(j)) count += e.sign;
    EXPECT_EQ(y[j], static_cast<double>(count));
  }
}

TEST(Csldpc, EncodeMatchesDenseProduct) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> nd(0.0, 3.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto phi = generate_matrix(params(50, 30, 6, false, seed));
    std::vector<double> x(50);
    for (auto& v : x) v = nd(gen);
    // Row sums of 6 terms in index order are exactly reproducible.
    EXPECT_EQ(encode(phi, x), testref::dense_matvec(phi, x));
  }
}

TEST(Csldpc, EncodeShapeError) {
  const auto phi = generate_matrix(params(50, 20, 5, false, 4));
  EXPECT_THROW(encode(phi, std::vector<double>(49, 0.0)), ShapeError);
}

TEST(Csldpc, EncodeLinearity) {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> nd;
  const auto phi = generate_matrix(params(300, 120, 20, false, 5));
  std::vector<double> x(300), z(300), comb(300);
  for (auto& v : x) v = nd(gen);
  for (auto& v : z) v = nd(gen);
  const double a = 1.7, b = -0.3;
  for (std::size_t i = 0; i < 300; ++i) comb[i] = a * x[i] + b * z[i];
  const auto yc = encode(phi, comb), yx = encode(phi, x), yz = encode(phi, z);
  for (std::size_t j = 0; j < 120; ++j) EXPECT_NEAR(yc[j], a * yx[j] + b * yz[j], 1e-12 * 40);
}

TEST(Csldpc, RuleOfThumb) {
  EXPECT_EQ(rule_of_thumb_params(16, 0.5, 1.0, false).params.l, 2u);
  const auto r = rule_of_thumb_params(1000, 0.1, 1.0, true, 20);
  EXPECT_EQ(r.params.l, 20u);
  EXPECT_EQ((r.params.l * r.params.m) % 1000, 0u);
  EXPECT_EQ(r.r, r.params.l * r.params.m / 1000);
  EXPECT_GE(static_cast<double>(r.params.m), std::ceil(0.1 * 1000 * std::log2(1000.0)));
  const auto ten = rule_of_thumb_params(1000, 0.1, 1.0, false);
  EXPECT_EQ(ten.params.l, 10u);
  EXPECT_TRUE(rule_of_thumb_params(100, 0.5, 4.0, false).m_exceeds_n);
}

TEST(Csldpc, SerializeRoundTrip) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto phi = generate_matrix(params(60 + seed, 10 + seed % 7, 1 + seed % 9, false, seed));
    EXPECT_EQ(parse_matrix(serialize_matrix(phi)), phi);
  }
}

TEST(Csldpc, ParseErrorsNameLine) {
  try {
    parse_matrix("csldpc v1 0 3 2 0\n");
    FAIL() << "empty header accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  try {
    parse_matrix("csldpc v1 1 3 2 0\n0 0 1\n0 0 -1\n");
    FAIL() << "duplicate edge accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    parse_matrix("csldpc v1 1 3 2 0\n0 0 1\n0 3 -1\n");
    FAIL() << "out-of-range column accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Csldpc, SmallMatrixEdgeRecords) {
  SparseSignMatrix phi(3, 2, {{{0, 1}, {2, -1}}, {{1, 1}, {2, 1}}});
  const std::string text = serialize_matrix(phi);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);  // header + 4 edges
  EXPECT_EQ(build_graph(phi).n_edges(), 4u);
}

TEST(FactorGraph, TransposeAndReconstruction) {
  const auto phi = generate_matrix(params(100, 40, 10, true, 8));
  const FactorGraph g(phi);
  EXPECT_EQ(g.n_edges(), phi.nnz());
  for (std::size_t j = 0; j < g.n_con(); ++j) {
    ASSERT_EQ(g.con_degree(j), 10u);
    for (std::size_t e = g.con_begin(j); e < g.con_end(j); ++e) ASSERT_EQ(g.edge(e).con, j);
  }
  for (std::size_t i = 0; i < g.n_var(); ++i) {
    ASSERT_EQ(g.var_edges(i).size(), phi.col_weight(i));
    for (auto e : g.var_edges(i)) ASSERT_EQ(g.edge(e).var, i);
  }
  EXPECT_EQ(g.to_matrix(), phi);
}

TEST(Csldpc, PrefixRows) {
  const auto phi = generate_matrix(params(100, 40, 10, false, 8));
  const auto pre = phi.prefix_rows(15);
  ASSERT_EQ(pre.rows(), 15u);
  for (std::size_t j = 0; j < 15; ++j) {
    EXPECT_TRUE(std::equal(pre.row(j).begin(), pre.row(j).end(), phi.row(j).begin()));
  }
}
