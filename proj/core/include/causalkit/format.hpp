#pragma once

#include <string>

namespace causalkit {

// Shortest decimal string that parses back to exactly `value`. Fixed notation
// is used for decimal exponents in [-4, 16), scientific otherwise; integral
// values keep a trailing ".0" so they read as floating point ("1.0", not "1").
std::string format_double(double value);

}  // namespace causalkit
