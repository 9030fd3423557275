#include "kp/rational.hpp"

#include <stdexcept>

namespace kp {

std::string to_string(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(const std::string& s) {
    Rational r;
    std::string t;
    for (char ch : s)
        if (ch != ' ' && ch != '+') t += ch;
    if (t.empty() || r.set_str(t, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
}

Rational rat(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace kp
