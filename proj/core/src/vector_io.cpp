#include "csbp/vector_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "csbp/error.hpp"

namespace csbp {

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_vector(std::ostream& os, std::span<const double> v) {
  os << "csvec v1 " << v.size() << '\n';
  for (double x : v) os << format_double(x) << '\n';
}

std::string serialize_vector(std::span<const double> v) {
  std::ostringstream ss;
  write_vector(ss, v);
  return ss.str();
}

std::vector<double> read_vector(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError(1, "missing csvec header");
  std::istringstream header(line);
  std::string magic;
  std::string version;
  std::size_t len = 0;
  std::string extra;
  if (!(header >> magic >> version >> len) || magic != "csvec" || version != "v1" || (header >> extra)) {
    throw ParseError(1, "malformed header, expected 'csvec v1 <len>'");
  }
  std::vector<double> out;
  out.reserve(len);
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (out.size() == len) throw ParseError(lineno, "more values than the header declares");
    double v = 0.0;
    const auto* end = line.data() + line.size();
    const auto [ptr, ec] = std::from_chars(line.data(), end, v);
    if (ec != std::errc() || ptr != end) throw ParseError(lineno, "not a number: '" + line + "'");
    if (!std::isfinite(v)) throw ParseError(lineno, "non-finite value");
    out.push_back(v);
  }
  if (out.size() != len) {
    throw ParseError(lineno, "expected " + std::to_string(len) + " values, found " + std::to_string(out.size()));
  }
  return out;
}

std::vector<double> parse_vector(const std::string& text) {
  std::istringstream ss(text);
  return read_vector(ss);
}

void save_vector(const std::string& path, std::span<const double> v) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_vector(out, v);
  if (!out) throw InputError("failed writing '" + path + "'");
}

std::vector<double> load_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_vector(in);
}

}  // namespace csbp
