#include <gtest/gtest.h>

#include <cmath>
#include <bit>
#include <limits>
#include <random>

#include "csbp/config.hpp"
#include "csbp/error.hpp"
#include "csbp/vector_io.hpp"

using namespace csbp;

TEST(VectorIo, RoundTripIsExact) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> nd(0.0, 1e3);
  std::vector<double> v(500);
  for (auto& x : v) x = nd(gen);
  v.push_back(0.0);
  v.push_back(-0.0);
  v.push_back(std::numeric_limits<double>::denorm_min());
  v.push_back(1e308);
  const auto back = parse_vector(serialize_vector(v));
  ASSERT_EQ(back.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(std::bit_cast<std::uint64_t>(back[i]), std::bit_cast<std::uint64_t>(v[i]));
}

TEST(VectorIo, HeaderAndErrors) {
  EXPECT_EQ(serialize_vector(std::vector<double>{1.5, -2.0}), "csvec v1 2\n1.5\n-2\n");
  EXPECT_THROW(parse_vector("csvec v2 1\n1\n"), ParseError);
  try {
    parse_vector("csvec v1 3\n1\nabc\n3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_vector("csvec v1 3\n1\n2\n"), ParseError);
}

TEST(KeyValueConfig, ParseAndTypes) {
  const auto kv = KeyValueConfig::parse(
      "# comment\nmodel.n = 100, 200\nmodel.s=0.25  # trailing\n\nrun.algorithms = csbp,iht\n"
      "output.wall_time = true\n");
  EXPECT_EQ(kv.get_uint_list("model.n", {}), (std::vector<std::uint64_t>{100, 200}));
  EXPECT_DOUBLE_EQ(kv.get_double("model.s", 0), 0.25);
  EXPECT_EQ(kv.get_string_list("run.algorithms", {}), (std::vector<std::string>{"csbp", "iht"}));
  EXPECT_TRUE(kv.get_bool("output.wall_time", false));
  EXPECT_EQ(kv.get_uint("missing", 7), 7u);
}

TEST(KeyValueConfig, Errors) {
  try {
    KeyValueConfig::parse("a = 1\nnot an assignment\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
  }
  auto kv = KeyValueConfig::parse("model.n = x\n");
  EXPECT_THROW(kv.get_uint("model.n", 1), ConfigError);
  kv.apply_override("model.bogus=3");
  try {
    kv.require_known({"model.n"});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("model.bogus"), std::string::npos);
  }
  EXPECT_THROW(kv.apply_override("no_equals"), ConfigError);
}
