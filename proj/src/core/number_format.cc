#include "mbrl/core/number_format.h"

#include <charconv>
#include <stdexcept>
#include <string>
#include <system_error>

namespace mbrl {

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double ParseDouble(std::string_view token) {
  double v = 0.0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw std::invalid_argument("not a number: '" + std::string(token) + "'");
  }
  return v;
}

long long ParseInt(std::string_view token) {
  long long v = 0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw std::invalid_argument("not an integer: '" + std::string(token) + "'");
  }
  return v;
}

}  // namespace mbrl
