#ifndef MBRL_CORE_NUMBER_FORMAT_H_
#define MBRL_CORE_NUMBER_FORMAT_H_

#include <string>
#include <string_view>

namespace mbrl {

// Shortest decimal text that parses back to the identical double.
std::string FormatDouble(double v);

// Strict parse of a full token; throws std::invalid_argument on failure.
double ParseDouble(std::string_view token);
long long ParseInt(std::string_view token);

}  // namespace mbrl

#endif  // MBRL_CORE_NUMBER_FORMAT_H_
