#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kp/tseries.hpp"

namespace kp {

// c = -sum_i (lambda_i + c)^{-1/2} solved formally; keeps terms of weight <= W + 1/2
// (the argument is 2W), so c_series(6) carries t0^2 t2 and t1^2 t0
TSeries c_series(int w2);

// k-free genus-zero part: integer indices with sum d_i = n - 3
TSeries genus_zero_k0(const TSeries& F);
// -2 d^2 F0 / dt0^2, compared against c_series(w2); F must be complete through w2 + 3
bool specific_heat_check(int w2, const TSeries& F);

struct WExpansion {
    TSeries remainder;  // t-series left after the Z0 part
    TSeries c;          // the c series substituted
};
// W1 + W2 + W3 + W4 with c = c_series, truncated at weight W (argument 2W)
WExpansion assemble_W(int w2);
// (2/3) sum lambda^{3/2} - (1/2) sum_{ij} log(sqrt(l_i) + sqrt(l_j)) + (k/2) sum log lambda
double z0_part(const std::vector<double>& lambdas, double k = 0);

struct SaddleState {
    double c = 0;
    double endpoint_margin = 0;  // min lambda + c
    double x_ref = 0;
    double residual = 0;
};

struct NoRootError : std::runtime_error {
    double margin;
    NoRootError(const std::string& m, double mg) : std::runtime_error(m), margin(mg) {}
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// normalized discrete measure, weight 1/P per eigenvalue
double rho_moment(const SpectrumSample& s, double c, double power);
double eval_normalized(const TSeries& a, const SpectrumSample& s);

// root of c + sum rho/sqrt(l+c) - k_ratio / w(x) = 0 on the branch continuous with c ~ -t0
double solve_c_at(const SpectrumSample& s, double x);
SaddleState numeric_c(const SpectrumSample& s);

double numeric_w(double x, const SpectrumSample& s, double c);
inline double numeric_w(double x, const SpectrumSample& s, const SaddleState& st) {
    return numeric_w(x, s, st.c);
}

// left-hand side of the cubic equation at fixed c
double cubic_residual_at(double x, const SpectrumSample& s, double c);
// k = 0 uses st.c; otherwise c is re-solved at x (c depends on x when k != 0)
double cubic_residual(double x, const SpectrumSample& s, const SaddleState& st);

// one lambda per line, '#' comments, optional "k_ratio = r"
SpectrumSample read_spectrum(const std::string& path);
SpectrumSample parse_spectrum(const std::string& text);

}  // namespace kp
