#pragma once

#include <string>
#include <vector>

#include "kp/rational.hpp"

namespace kp {

// Dense polynomial in the spectator parameter k.
class KPoly {
public:
    KPoly() = default;
    KPoly(const Rational& c);
    KPoly(long c) : KPoly(Rational(c)) {}
    explicit KPoly(std::vector<Rational> coeffs);

    static KPoly k();

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(int i) const;

    KPoly& operator+=(const KPoly& o);
    KPoly& operator-=(const KPoly& o);
    KPoly& operator*=(const Rational& s);
    KPoly operator-() const;

    friend KPoly operator+(KPoly a, const KPoly& b) { return a += b; }
    friend KPoly operator-(KPoly a, const KPoly& b) { return a -= b; }
    friend KPoly operator*(const KPoly& a, const KPoly& b);
    friend KPoly operator*(KPoly a, const Rational& s) { return a *= s; }
    friend KPoly operator*(const Rational& s, KPoly a) { return a *= s; }
    friend bool operator==(const KPoly& a, const KPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const KPoly& a, const KPoly& b) { return !(a == b); }

    Rational eval(const Rational& k) const;
    double eval(double k) const;
    KPoly flip_k() const;  // k -> -k
    // fused a += b*c without temporaries
    void add_mul(const KPoly& b, const KPoly& c);

    std::string str() const;                 // "2k^3 + k"
    std::vector<std::string> to_strings() const;
    static KPoly from_strings(const std::vector<std::string>& v);

private:
    void trim();
    std::vector<Rational> c_;
};

// Lagrange interpolation through (x_i, y_i); xs distinct
KPoly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys);

}  // namespace kp
