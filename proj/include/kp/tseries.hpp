#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kp/kpoly.hpp"

namespace kp {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// index n of t_n, stored as 2n
struct HalfIndex {
    int twice = 0;
    static HalfIndex of_power(int j) { return {j - 1}; }  // t_n = p_{2n+1}
    int power() const { return twice + 1; }
    std::string str() const;
    friend bool operator<(HalfIndex a, HalfIndex b) { return a.twice < b.twice; }
    friend bool operator==(HalfIndex a, HalfIndex b) { return a.twice == b.twice; }
};

// half-integers on the wire look like "9/2" or "3"; returns twice the value
int parse_half(const std::string& s);
std::string half_str(int twice);

class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::vector<std::pair<int, int>> twice_exp);
    static Monomial var(HalfIndex n, int e = 1);
    static Monomial from_powers(const std::vector<int>& js);  // product of p_j

    const std::vector<std::pair<int, int>>& items() const { return e_; }
    int weight2() const;  // twice the weight
    int degree() const;
    int exponent(HalfIndex n) const;
    bool empty() const { return e_.empty(); }
    // sorted list of p-powers with multiplicity
    std::vector<int> powers() const;

    friend Monomial operator*(const Monomial& a, const Monomial& b);
    friend bool operator<(const Monomial& a, const Monomial& b) { return a.e_ < b.e_; }
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e_ == b.e_; }
    std::string str() const;

private:
    std::vector<std::pair<int, int>> e_;
};

struct SpectrumSample {
    std::vector<double> lambdas;
    double k_ratio = 0.0;
};

class TSeries {
public:
    explicit TSeries(int w2 = 0) : w2_(w2) {}
    static TSeries one(int w2);

    int w2() const { return w2_; }
    const std::map<Monomial, KPoly>& terms() const { return t_; }
    KPoly coeff(const Monomial& m) const;
    void add_term(const Monomial& m, const KPoly& c);
    bool is_zero() const { return t_.empty(); }
    size_t size() const { return t_.size(); }

    TSeries& operator+=(const TSeries& o);
    TSeries& operator-=(const TSeries& o);
    friend TSeries operator+(TSeries a, const TSeries& b) { return a += b; }
    friend TSeries operator-(TSeries a, const TSeries& b) { return a -= b; }
    friend TSeries operator*(const TSeries& a, const TSeries& b);
    TSeries scaled(const KPoly& s) const;
    friend bool operator==(const TSeries& a, const TSeries& b) { return a.w2_ == b.w2_ && a.t_ == b.t_; }

    TSeries truncated(int w2) const;
    TSeries homogeneous(int w2) const;
    TSeries flip_k() const;
    TSeries at_k(const Rational& k) const;

    std::string to_json() const;
    static TSeries from_json(const std::string& s);

private:
    int w2_;
    std::map<Monomial, KPoly> t_;
};

TSeries mul(const TSeries& a, const TSeries& b);
TSeries exp_series(const TSeries& a);
TSeries log_series(const TSeries& a);
TSeries d_dt(const TSeries& a, HalfIndex n);
double eval_at_spectrum(const TSeries& a, const SpectrumSample& s, double k);

}  // namespace kp
