#pragma once

#include <map>
#include <string>
#include <vector>

#include "kp/tseries.hpp"

namespace kp {

// Exact Laurent polynomial in nu contour variables and ns s-variables.
// Exponent vectors hold the contour exponents first.
class LaurentPoly {
public:
    using Exps = std::vector<int>;
    LaurentPoly(int nu = 0, int ns = 0, int smax = -1) : nu_(nu), ns_(ns), smax_(smax) {}

    static LaurentPoly constant(int nu, int ns, int smax, const Rational& c);
    static LaurentPoly contour_var(int nu, int ns, int smax, int i, int power = 1);
    static LaurentPoly s_var(int nu, int ns, int smax, int j, int power = 1);

    int nu() const { return nu_; }
    int ns() const { return ns_; }
    int smax() const { return smax_; }  // total s-degree cap, -1 for none
    const std::map<Exps, Rational>& terms() const { return t_; }
    Rational coeff(const Exps& e) const;
    void add_term(const Exps& e, const Rational& c);

    LaurentPoly& operator+=(const LaurentPoly& o);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    LaurentPoly scaled(const Rational& c) const;
    // every term must have positive s-degree; truncated by the s-degree cap
    LaurentPoly exp() const;
    LaurentPoly pow(int n) const;
    int s_degree(const Exps& e) const;
    // keep only contour powers >= floor in variable i
    LaurentPoly contour_floor(int i, int floor) const;

private:
    int nu_, ns_, smax_;
    std::map<Exps, Rational> t_;
};

// coefficient of u_i^{-1}; the variable's exponent slot is set to 0
LaurentPoly residue(const LaurentPoly& f, int var);

// <tr M^{2j}> of the k x k Gaussian model
KPoly gaussian_moment(int j);
// coefficients of U(s) = <tr e^{sM}>, index = power of s
std::vector<KPoly> gaussian_U(int order);

struct GreenExpansion {
    KPoly log_coeff;  // multiplies log(lambda_hat)
    TSeries t_part;
};
GreenExpansion green_expansion(int order);

// one-point function of the model with the log term, index = power of s
std::vector<KPoly> kp_onepoint(int s_order);
// two-point function keyed by (power of s1, power of s2)
std::map<std::pair<int, int>, KPoly> kp_twopoint(int s_order);

// formal polynomial in the matrix size P, stored as a KPoly in the variable
using PPoly = KPoly;

struct MomentWord {
    std::vector<int> powers;
};
Rational replica_sinh(const MomentWord& w);
PPoly wick_multitrace(const MomentWord& w);

struct SixTermResult {
    std::vector<std::string> labels;
    std::vector<KPoly> raw;   // each display's value at unit lambda
    KPoly raw_total;
    Rational rescale;         // fixed so that the total matches the one-point coefficient
    KPoly total;
};
SixTermResult six_term_check();

// s -> t dictionary. An n-point term c * prod s_i^{m_i} contributes
// c * global(n) / n! * prod point(m_i) * prod t_{m_i - 1/2}, in the sign convention of
// the printed free-energy table.
struct Dictionary {
    static Rational point(int m);   // (-1)^m (m-1)!
    static Rational global(int n);  // (-1)^{n+1} 2^{-n}
};
TSeries s_to_t(const std::vector<KPoly>& one, const std::map<std::pair<int, int>, KPoly>& two, int w2);

// Ratio between a free-energy coefficient and the bare correlator coefficient
// (before point and global factors), for each one- or two-point monomial of weight <= w2.
struct CalibrationPoint {
    std::vector<int> m;  // s-powers
    Rational ratio;      // F coefficient / (sum over orderings of c / n!)
    bool defined;        // false if the correlator coefficient vanishes
};
std::vector<CalibrationPoint> calibrate(const TSeries& F_table, const std::vector<KPoly>& one,
                                        const std::map<std::pair<int, int>, KPoly>& two, int w2);

}  // namespace kp
