#include "kp/kpoly.hpp"

#include <sstream>
#include <stdexcept>

namespace kp {

KPoly::KPoly(const Rational& c) {
    if (c != 0) c_.push_back(c);
}

KPoly::KPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

KPoly KPoly::k() { return KPoly(std::vector<Rational>{0, 1}); }

void KPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational KPoly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
    return c_[i];
}

KPoly& KPoly::operator+=(const KPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

KPoly& KPoly::operator-=(const KPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
}

KPoly& KPoly::operator*=(const Rational& s) {
    if (s == 0) {
        c_.clear();
        return *this;
    }
    for (auto& x : c_) x *= s;
    return *this;
}

KPoly KPoly::operator-() const {
    KPoly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

KPoly operator*(const KPoly& a, const KPoly& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return KPoly(std::move(r));
}

void KPoly::add_mul(const KPoly& b, const KPoly& c) {
    if (b.c_.empty() || c.c_.empty()) return;
    size_t n = b.c_.size() + c.c_.size() - 1;
    if (c_.size() < n) c_.resize(n);
    Rational t;
    for (size_t i = 0; i < b.c_.size(); ++i)
        for (size_t j = 0; j < c.c_.size(); ++j) {
            mpq_mul(t.get_mpq_t(), b.c_[i].get_mpq_t(), c.c_[j].get_mpq_t());
            c_[i + j] += t;
        }
    trim();
}

Rational KPoly::eval(const Rational& k) const {
    Rational r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * k + *it;
    return r;
}

double KPoly::eval(double k) const {
    double r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * k + it->get_d();
    return r;
}

KPoly KPoly::flip_k() const {
    KPoly r = *this;
    for (size_t i = 1; i < r.c_.size(); i += 2) r.c_[i] = -r.c_[i];
    return r;
}

std::string KPoly::str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Rational& a = c_[i];
        if (a == 0) continue;
        Rational m = abs(a);
        if (first)
            os << (a < 0 ? "-" : "");
        else
            os << (a < 0 ? " - " : " + ");
        first = false;
        bool unit = (m == 1);
        if (!unit || i == 0) os << m.get_str();
        if (i >= 1) os << "k";
        if (i >= 2) os << "^" << i;
    }
    return os.str();
}

std::vector<std::string> KPoly::to_strings() const {
    std::vector<std::string> v;
    for (auto& a : c_) v.push_back(to_string(a));
    if (v.empty()) v.push_back("0/1");
    return v;
}

KPoly KPoly::from_strings(const std::vector<std::string>& v) {
    std::vector<Rational> c;
    for (auto& s : v) c.push_back(parse_rational(s));
    return KPoly(std::move(c));
}

KPoly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("interpolate: size mismatch");
    KPoly r;
    for (size_t i = 0; i < xs.size(); ++i) {
        KPoly basis(Rational(1));
        Rational den = 1;
        for (size_t j = 0; j < xs.size(); ++j) {
            if (j == i) continue;
            basis = basis * KPoly(std::vector<Rational>{-xs[j], 1});
            den *= xs[i] - xs[j];
        }
        r += basis * (ys[i] / den);
    }
    return r;
}

}  // namespace kp
