#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "kp/rational.hpp"

namespace kp {

// (lambda_i - lambda_j)^{-power}, stored with i < j
struct EigFactor {
    int i = 0, j = 0, power = 1;
    friend bool operator<(const EigFactor& a, const EigFactor& b) {
        return std::tie(a.i, a.j, a.power) < std::tie(b.i, b.j, b.power);
    }
    friend bool operator==(const EigFactor& a, const EigFactor& b) {
        return a.i == b.i && a.j == b.j && a.power == b.power;
    }
};

struct EigTerm {
    Rational coeff;
    std::vector<EigFactor> factors;  // sorted, distinct pairs
    std::vector<int> derivs;         // d/d lambda indices, sorted
};

class EigOperator {
public:
    explicit EigOperator(int P = 0) : P_(P) {}
    static EigOperator identity(int P);
    static EigOperator d(int P, int c);

    int P() const { return P_; }
    size_t size() const { return t_.size(); }
    std::vector<EigTerm> terms() const;

    // factors may come in either orientation; a pair may repeat
    void add(const Rational& c, const std::vector<std::pair<int, int>>& inv_diffs, std::vector<int> derivs);

    EigOperator& operator+=(const EigOperator& o);
    EigOperator& operator-=(const EigOperator& o);
    EigOperator scaled(const Rational& s) const;
    // d/d lambda_c composed on the left (acts on the coefficients too)
    EigOperator compose_d(int c) const;
    // left multiplication by 1/(lambda_a - lambda_b)
    EigOperator times_inv_diff(int a, int b) const;
    // three-point rewrite until no (i,k)(j,k) pair with i<j<k remains
    EigOperator canonical() const;

    friend bool operator==(const EigOperator& a, const EigOperator& b) { return a.P_ == b.P_ && a.t_ == b.t_; }
    std::string str() const;

    // coefficient functions evaluated at a point; derivs -> value
    std::map<std::vector<int>, double> coefficients_at(const std::vector<double>& lambdas) const;

private:
    using Key = std::pair<std::vector<EigFactor>, std::vector<int>>;
    void add_key(const Key& k, const Rational& c);
    int P_;
    std::map<Key, Rational> t_;
};

// Gamma_c^{(p)} for every c, canonical form
std::vector<EigOperator> gamma_all(int p, int P);
EigOperator gamma(int p, int P, int c = 0);
// same recursion with the d-sum taken in reverse and no intermediate canonicalization
EigOperator gamma_alt_order(int p, int P, int c = 0);
// closed third-order display; include_d_eq_c lets the double sum also run over d = c
EigOperator gamma3_display(int P, int c, bool include_d_eq_c);

// analytic partials of f: derivs (sorted indices) -> value at lambdas
using PartialFn = std::function<double(const std::vector<int>&, const std::vector<double>&)>;
// f = sum_i g(lambda_i); g(order, x) returns the order-th derivative
PartialFn trace_function(std::function<double(int, double)> g);

struct DomainErrorEig : std::runtime_error {
    using std::runtime_error::runtime_error;
};
double apply_eig(const EigOperator& op, const PartialFn& f, const std::vector<double>& lambdas);

using CMatrix = Eigen::MatrixXcd;
using MatrixFn = std::function<std::complex<double>(const CMatrix&)>;

struct FdResult {
    std::complex<double> value;
    double min_gap = 0;
    bool ill_conditioned = false;  // gap below the floor
};

// entry (a,b) of the p-fold matrix derivative, (d/dLambda)_{ab} = d/dLambda_{ab}, chained as a matrix product
FdResult matrix_derivative_fd(const MatrixFn& F, const CMatrix& Lambda, int p, int a, int b, double gap_floor = 0.1);
// sum_c <b|phi_c> Gamma_c^{(p)} f <phi_c|a>
std::complex<double> spectral_derivative(const std::vector<EigOperator>& gam, const PartialFn& f, const CMatrix& Lambda,
                                         int a, int b);

}  // namespace kp
