#pragma once

#include <gmpxx.h>
#include <string>

namespace kp {

// mpq_class keeps values canonical after every arithmetic op
using Rational = mpq_class;

std::string to_string(const Rational& r);   // always "p/q"
Rational parse_rational(const std::string& s);
Rational rat(long num, long den = 1);

}  // namespace kp
