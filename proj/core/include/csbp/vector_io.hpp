#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace csbp {

/// Text format: header "csvec v1 <len>", then one value per line in
/// round-trip precision.
void write_vector(std::ostream& os, std::span<const double> v);
std::string serialize_vector(std::span<const double> v);

/// Throws ParseError naming the offending line.
std::vector<double> read_vector(std::istream& is);
std::vector<double> parse_vector(const std::string& text);

void save_vector(const std::string& path, std::span<const double> v);
std::vector<double> load_vector(const std::string& path);

/// Shortest decimal text that parses back to exactly x.
std::string format_double(double x);

}  // namespace csbp
