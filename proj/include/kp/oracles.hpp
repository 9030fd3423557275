#pragma once

#include <stdexcept>
#include <vector>

#include "kp/tseries.hpp"

namespace kp {

struct ContourQuadrature {
    double bend_point = 0;        // sqrt(lambda), the dominant saddle
    double ray_angle = 0;         // 2 pi / 3
    double bend_radius = 0;       // where the ray meets the real axis (0: the origin)
    double truncation_radius = 0; // where the scaled integrand is below e^-60
    int refinements = 0;          // tanh-sinh levels; each level doubles the node count
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// log of Re int b^k e^{-b^3/3 + lambda b} db with e^{(2/3) lambda^{3/2}} taken out;
// contour: ray at angle 2pi/3 in to the origin, then the real axis through sqrt(lambda)
double airy_log_scaled(double lambda, int k, int refinements = 10, ContourQuadrature* info = nullptr);
// log Z(lambda) - log Z0(lambda), P = 1
double airy_log_ratio(double lambda, int k, int refinements = 10);
// positive real Z; fails when one more refinement level moves it by more than 1e-10 relative
double airy_Z(double lambda, int k);

struct ScanResult {
    std::vector<double> lambdas;      // left point of each differenced pair
    std::vector<double> differences;  // r(l_i) - r(l_{i+1}), r = log(Z/Z0) - F
    double slope = 0;
    bool saturated = false;
};

// grid must be increasing and geometric; F in the model convention, already truncated;
// z_scale multiplies Z (must drop out)
ScanResult asymptotic_residual_scan(const std::vector<double>& lambdas, int k, const TSeries& F, double z_scale = 1.0);
std::vector<double> geometric_grid(double lo, double hi, int points);

// (log ratio(l1) - log ratio(l2)) / (l1^{-3/2} - l2^{-3/2}) at k = 0; tends to the weight-3/2 total
double leading_coefficient_extraction(double l1, double l2);

// exact P = 1 series: log(Z/Z0) = sum_n a_n y^n, y = lambda^{-1/2}, from the third-order ODE
// satisfied by the contour integral; model k convention; index n = doubled weight
std::vector<KPoly> p1_log_series(int order);
// F at P = 1 (all t_n = y^{2n+1}), grouped by doubled weight
std::vector<KPoly> reduce_to_p1(const TSeries& F);

}  // namespace kp
