#include <cmath>
#include <numbers>

#include <boost/math/special_functions/airy.hpp>

#include "doctest.h"
#include "kp/oracles.hpp"

using namespace kp;

TEST_CASE("k = 0 integral is pi Bi") {
    for (double l : {4.0, 8.0, 16.0, 32.0, 64.0}) {
        double ref = std::log(std::numbers::pi * boost::math::airy_bi(l)) - 2.0 / 3.0 * std::pow(l, 1.5);
        CHECK(airy_log_scaled(l, 0) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("differentiation under the integral") {
    for (double l : {4.0, 9.0, 25.0, 64.0})
        for (int k = 1; k <= 4; ++k) {
            double h = 1e-3 / std::sqrt(l);
            auto cd = [&](double hh) { return (airy_Z(l + hh, k - 1) - airy_Z(l - hh, k - 1)) / (2 * hh); };
            double d = (4 * cd(h / 2) - cd(h)) / 3;
            CAPTURE(l);
            CAPTURE(k);
            CHECK(std::abs(d / airy_Z(l, k) - 1) < 1e-6);
        }
}

TEST_CASE("node doubling") {
    for (double l : {4.0, 16.0, 64.0})
        for (int k = 0; k <= 4; ++k)
            CHECK(std::abs(std::expm1(airy_log_scaled(l, k, 11) - airy_log_scaled(l, k, 10))) < 1e-10);
}

TEST_CASE("k = 1 ratio grows like sqrt(lambda)") {
    double r = std::exp(airy_log_scaled(400, 1) - airy_log_scaled(400, 0));
    CHECK(r / 20 == doctest::Approx(1).epsilon(1e-3));
}

TEST_CASE("exact P = 1 series") {
    auto a = p1_log_series(12);
    CHECK(a[3] == KPoly(std::vector<Rational>{rat(5, 48), rat(-1, 2), rat(1, 4)}));
    CHECK(a[6] == KPoly(std::vector<Rational>{rat(5, 64), rat(-17, 24), rat(11, 16), rat(-1, 6)}));
    for (int n : {1, 2, 4, 5, 7, 8, 10, 11}) CHECK(a[n].is_zero());
}

TEST_CASE("leading coefficient extraction") {
    CHECK(leading_coefficient_extraction(32, 64) == doctest::Approx(5.0 / 48).epsilon(0.02));
}

TEST_CASE("residual scan") {
    TSeries F(3);
    F.add_term(Monomial::var({0}, 3), KPoly(rat(1, 12)));
    F.add_term(Monomial::var({2}), KPoly(std::vector<Rational>{rat(1, 48), 0, rat(1, 4)}));
    F.add_term(Monomial::var({0}) * Monomial::var({1}), KPoly(std::vector<Rational>{0, rat(-1, 2)}));
    auto grid = geometric_grid(8, 64, 7);
    for (int k = 0; k <= 2; ++k) {
        auto r = asymptotic_residual_scan(grid, k, F);
        CHECK_FALSE(r.saturated);
        CHECK(r.slope == doctest::Approx(-3.0).epsilon(0.1));
        auto s = asymptotic_residual_scan(grid, k, F, 1e3);
        for (size_t i = 0; i < r.differences.size(); ++i) CHECK(s.differences[i] == doctest::Approx(r.differences[i]).epsilon(1e-10));
    }
    CHECK_THROWS_AS(asymptotic_residual_scan(geometric_grid(8, 16, 4), 0, F), UsageError);
    CHECK_THROWS_AS(airy_log_scaled(-1, 0), UsageError);
}
