#include <cmath>

#include "doctest.h"
#include "kp/constraints.hpp"
#include "kp/largen.hpp"

using namespace kp;

namespace {
Monomial t(int twice, int e = 1) { return Monomial::var({twice}, e); }
}  // namespace

TEST_CASE("c series and the W remainder") {
    TSeries c = c_series(6);
    CHECK(c.coeff(t(0)) == KPoly(-1));
    CHECK(c.coeff(t(0) * t(2)) == KPoly(rat(-1, 2)));
    CHECK(c.coeff(t(0, 2) * t(4)) == KPoly(rat(-3, 8)));
    CHECK(c.coeff(t(2, 2) * t(0)) == KPoly(rat(-1, 4)));
    CHECK(c.size() == 4);
    TSeries rem = assemble_W(6).remainder;
    CHECK(rem.coeff(t(0, 3)) == KPoly(rat(1, 12)));
    CHECK(rem.coeff(t(0, 3) * t(2)) == KPoly(rat(1, 24)));
    CHECK(rem.size() == 2);
    TSeries rem9 = assemble_W(9).remainder;
    CHECK(rem9.coeff(t(0, 3) * t(2, 2)) == KPoly(rat(1, 48)));
    CHECK(rem9.coeff(t(0, 4) * t(4)) == KPoly(rat(1, 64)));
}

TEST_CASE("genus zero part and the specific heat") {
    TSeries F = free_energy(6);
    TSeries g0 = genus_zero_k0(F);
    CHECK(g0.coeff(t(0, 3)) == KPoly(rat(1, 12)));
    CHECK(g0.coeff(t(2)).is_zero());
    CHECK_THROWS_AS(specific_heat_check(6, F), UsageError);
    CHECK(specific_heat_check(3, F));
}

TEST_CASE("single eigenvalue saddle") {
    SaddleState st = numeric_c({{4.0}, 0.0});
    CHECK(st.c == doctest::Approx(-0.537402).epsilon(1e-6));
    CHECK(std::abs(st.c + 1 / std::sqrt(4 + st.c)) < 1e-12);
    CHECK(st.endpoint_margin > 0);
}

TEST_CASE("cubic residual vanishes, and only at the root") {
    SpectrumSample s{{2.5, 3.0, 7.25}, 0.0};
    SaddleState st = numeric_c(s);
    for (double x : {10.0, 30.0, 300.0}) CHECK(std::abs(cubic_residual(x, s, st)) < 1e-10);
    CHECK(std::abs(cubic_residual_at(30.0, s, st.c + 1e-3)) > 1e-6);
    s.k_ratio = 0.1;
    SaddleState sk = numeric_c(s);
    for (double x : {10.0, 30.0, 300.0}) CHECK(std::abs(cubic_residual(x, s, sk)) < 1e-10);
}

TEST_CASE("large-x behaviour of w") {
    for (double kr : {0.0, 0.1}) {
        SpectrumSample s{{2.5, 3.0, 7.25}, kr};
        double x = 1e6;
        double v = x * (numeric_w(x, s, solve_c_at(s, x)) - std::sqrt(x));
        CHECK(v == doctest::Approx(-(1 - kr) / 2).epsilon(1e-3));
    }
}

TEST_CASE("series against numerics for large eigenvalues") {
    SpectrumSample s{{100, 121, 144}, 0.0};
    double c = numeric_c(s).c;
    double ser = eval_normalized(c_series(9), s);
    double bound = 1.5 * std::abs(eval_normalized(c_series(12).homogeneous(13), s));
    CHECK(std::abs(c - ser) <= bound);
}

TEST_CASE("infeasible coupling") {
    SpectrumSample s{{2.5, 3.0, 7.25}, -5.0};
    CHECK_THROWS_AS(numeric_c(s), NoRootError);
}

TEST_CASE("spectrum files") {
    SpectrumSample s = parse_spectrum("# comment\nk_ratio = 0.05\n4\n9 # trailing\n");
    CHECK(s.lambdas == std::vector<double>{4, 9});
    CHECK(s.k_ratio == 0.05);
    CHECK_THROWS_AS(parse_spectrum("abc\n"), UsageError);
    CHECK_THROWS_AS(parse_spectrum("nu = 3\n1\n"), UsageError);
    CHECK_THROWS_AS(parse_spectrum("-1\n"), UsageError);
    CHECK_THROWS_AS(read_spectrum("/nonexistent/spectrum.txt"), UsageError);
}

TEST_CASE("Z0 part") {
    // single eigenvalue: (2/3) l^{3/2} - (1/2) log(2 sqrt l) + (k/2) log l
    double l = 9;
    CHECK(z0_part({l}, 1) == doctest::Approx(2.0 / 3 * 27 - 0.5 * std::log(6.0) + 0.5 * std::log(9.0)));
}
