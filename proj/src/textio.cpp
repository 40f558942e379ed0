#include "mpr/textio.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace mpr {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw std::invalid_argument("parse_double: bad token '" + std::string(token) + "'");
  }
  return value;
}

std::vector<double> parse_csv_doubles(std::string_view line) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) comma = line.size();
    out.push_back(parse_double(line.substr(start, comma - start)));
    start = comma + 1;
    if (comma == line.size()) break;
  }
  return out;
}

}  // namespace mpr
