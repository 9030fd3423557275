#include "kp/oracles.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "kp/largen.hpp"

namespace kp {

namespace {

using cd = std::complex<double>;

// exponent minus the saddle value
cd scaled_exponent(cd b, double lambda, int k) {
    cd e = -b * b * b / 3.0 + lambda * b - 2.0 / 3.0 * std::pow(lambda, 1.5);
    if (k > 0) e += static_cast<double>(k) * std::log(b);
    return e;
}

double radius_below(double lambda, double start, double ray_cos, int k) {
    // scaled integrand magnitude along the ray decreases monotonically past the saddle
    double r = start;
    auto mag = [&](double x) {
        return -x * x * x / 3.0 + lambda * x * ray_cos - 2.0 / 3.0 * std::pow(lambda, 1.5) + k * std::log(x);
    };
    while (mag(r) > -60.0) r *= 1.25;
    return r;
}

}  // namespace

double airy_log_scaled(double lambda, int k, int refinements, ContourQuadrature* info) {
    if (!(lambda > 0)) throw UsageError("lambda must be positive");
    if (k < 0) throw UsageError("k must be a non-negative integer");
    const double s0 = std::sqrt(lambda);
    const double ang = 2 * std::numbers::pi / 3;
    const cd dir = std::polar(1.0, ang);
    const double Treal = radius_below(lambda, s0 * 1.01, 1.0, k);
    const double Tray = radius_below(lambda, 1.0, std::cos(ang), k);
    boost::math::quadrature::tanh_sinh<double> ts(static_cast<size_t>(refinements));
    const double tol = 0.0;

    auto f = [&](cd b) { return b == cd(0) && k > 0 ? cd(0) : std::exp(scaled_exponent(b, lambda, k)); };
    // real axis 0 -> T; the saddle is an endpoint of two pieces. A straight chord into the saddle
    // from the ray is not a descent direction there and cancels badly once lambda > 64.
    double real_part = ts.integrate([&](double t) { return f(cd(t, 0)).real(); }, 0.0, s0, tol);
    for (int i = 0; i < 4; ++i)
        real_part += ts.integrate([&](double t) { return f(cd(t, 0)).real(); }, s0 + (Treal - s0) * i / 4,
                                  s0 + (Treal - s0) * (i + 1) / 4, tol);
    // ray from Tray e^{i ang} in to the origin; the integrand decreases monotonically outward
    double ray = -ts.integrate([&](double r) { return (f(r * dir) * dir).real(); }, 0.0, Tray, tol);
    double total = real_part + ray;
    if (info) *info = {s0, ang, 0.0, std::max(Treal, Tray), refinements};
    if (!(total > 0)) throw QuadratureError("contour integral not positive");
    return std::log(total);
}

double airy_log_ratio(double lambda, int k, int refinements) {
    return airy_log_scaled(lambda, k, refinements) + 2.0 / 3.0 * std::pow(lambda, 1.5) - z0_part({lambda}, k);
}

double airy_Z(double lambda, int k) {
    double a = airy_log_scaled(lambda, k, 10), b = airy_log_scaled(lambda, k, 11);
    if (std::abs(std::expm1(b - a)) > 1e-10) throw QuadratureError("node doubling moved the integral by more than 1e-10");
    return std::exp(b + 2.0 / 3.0 * std::pow(lambda, 1.5));
}

std::vector<double> geometric_grid(double lo, double hi, int points) {
    if (points < 2 || !(lo > 0) || !(hi > lo)) throw UsageError("bad grid");
    std::vector<double> g;
    for (int i = 0; i < points; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
    return g;
}

ScanResult asymptotic_residual_scan(const std::vector<double>& lambdas, int k, const TSeries& F, double z_scale) {
    if (lambdas.size() < 3) throw UsageError("need at least three grid points");
    if (lambdas.back() < 4 * lambdas.front()) throw UsageError("grid must span a factor of 4");
    ScanResult res;
    std::vector<double> r;
    for (double l : lambdas) {
        double lr = airy_log_ratio(l, k) + std::log(z_scale);
        r.push_back(lr - eval_at_spectrum(F, SpectrumSample{{l}, 0.0}, k));
    }
    std::vector<double> x, y;
    for (size_t i = 0; i + 1 < lambdas.size(); ++i) {
        double d = r[i] - r[i + 1];
        res.lambdas.push_back(lambdas[i]);
        res.differences.push_back(d);
        if (std::abs(d) < 1e-13) res.saturated = true;
        x.push_back(std::log(lambdas[i]));
        y.push_back(std::log(std::abs(d)));
    }
    if (res.saturated) return res;
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= x.size();
    my /= y.size();
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
    res.slope = sxy / sxx;
    return res;
}

double leading_coefficient_extraction(double l1, double l2) {
    return (airy_log_ratio(l1, 0) - airy_log_ratio(l2, 0)) / (std::pow(l1, -1.5) - std::pow(l2, -1.5));
}

namespace {

using YSeries = std::map<int, KPoly>;

void accumulate(YSeries& a, int p, const KPoly& c) {
    if (c.is_zero()) return;
    auto& x = a[p];
    x += c;
    if (x.is_zero()) a.erase(p);
}

// D + S' with D = d/dlambda = -(y^3/2) d/dy and S' = y^{-1} + (k/2 - 1/4) y^2
YSeries conj_d(const YSeries& f) {
    const KPoly q = KPoly(std::vector<Rational>{rat(-1, 4), rat(1, 2)});
    YSeries r;
    for (auto& [m, c] : f) {
        accumulate(r, m + 2, c * rat(-m, 2));
        accumulate(r, m - 1, c);
        accumulate(r, m + 2, c * q);
    }
    return r;
}

}  // namespace

std::vector<KPoly> p1_log_series(int order) {
    if (order < 0) throw UsageError("negative order");
    YSeries g{{0, KPoly(Rational(1))}};
    const KPoly onek = KPoly(std::vector<Rational>{1, 1});
    for (int n = 1; n <= order; ++n) {
        // coefficient of y^n in -Dc^3 g + lambda Dc g + (1+k) g; the unknown c_n enters it with weight n
        YSeries d1 = conj_d(g), d3 = conj_d(conj_d(d1));
        KPoly e;
        if (auto it = d3.find(n); it != d3.end()) e -= it->second;
        if (auto it = d1.find(n + 2); it != d1.end()) e += it->second;
        if (auto it = g.find(n); it != g.end()) e += onek * it->second;
        accumulate(g, n, e * Rational(-1, n));
    }
    // log g
    std::vector<KPoly> h(order + 1), out(order + 1), pw(order + 1);
    for (auto& [m, c] : g)
        if (m >= 1 && m <= order) h[m] = c;
    pw = h;
    for (int j = 1; j <= order; ++j) {
        Rational s = (j % 2 ? Rational(1) : Rational(-1)) / j;
        for (int n = 0; n <= order; ++n) out[n] += pw[n] * s;
        std::vector<KPoly> nx(order + 1);
        for (int a = 1; a <= order; ++a)
            for (int b = 1; a + b <= order; ++b) nx[a + b].add_mul(pw[a], h[b]);
        pw = std::move(nx);
    }
    return out;
}

std::vector<KPoly> reduce_to_p1(const TSeries& F) {
    std::vector<KPoly> r(F.w2() + 1);
    for (auto& [m, c] : F.terms()) r[m.weight2()] += c;
    return r;
}

}  // namespace kp
