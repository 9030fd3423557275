#include "doctest.h"
#include "kp/tseries.hpp"

using namespace kp;

namespace {
KPoly kp_of(std::initializer_list<Rational> c) { return KPoly(std::vector<Rational>(c)); }
}  // namespace

TEST_CASE("half-integer parsing") {
    CHECK(parse_half("9/2") == 9);
    CHECK(parse_half("3") == 6);
    CHECK(parse_half("0") == 0);
    CHECK(half_str(3) == "3/2");
    CHECK_THROWS_AS(parse_half("1/3"), UsageError);
    CHECK_THROWS_AS(parse_half("x"), UsageError);
    CHECK_THROWS_AS(parse_half("-1/2"), UsageError);
}

TEST_CASE("kpoly arithmetic") {
    KPoly k = KPoly::k();
    KPoly p = k * k * Rational(2) + KPoly(1);
    CHECK(p.str() == "2k^2 + 1");
    CHECK((p * p).coeff(4) == 4);
    CHECK(p.flip_k() == p);
    CHECK((k * p).flip_k() == -(k * p));
    CHECK(p.eval(Rational(1, 2)) == Rational(3, 2));
    CHECK(KPoly::from_strings(p.to_strings()) == p);
    KPoly q = interpolate({0, 1, 2}, {1, 3, 9});
    CHECK(q == p);
}

TEST_CASE("monomial weight and powers") {
    Monomial m = Monomial::var({0}, 3) * Monomial::var({2});
    CHECK(m.weight2() == 6);
    CHECK(m.degree() == 4);
    CHECK(m.powers() == std::vector<int>{1, 1, 1, 3});
    CHECK(Monomial::from_powers({1, 1, 1, 3}) == m);
    CHECK(Monomial::var({1}).str() == "t_{1/2}");
}

TEST_CASE("truncation drops heavy terms") {
    TSeries a(3);
    a.add_term(Monomial::var({0}), KPoly(1));
    a.add_term(Monomial::var({4}), KPoly(1));  // weight 5/2
    CHECK(a.size() == 1);
}

TEST_CASE("exp and log are inverse") {
    TSeries F(6);
    F.add_term(Monomial::var({0}, 3), KPoly(rat(1, 12)));
    F.add_term(Monomial::var({2}), kp_of({rat(1, 48), 0, rat(1, 4)}));
    F.add_term(Monomial::var({0}) * Monomial::var({1}), kp_of({0, rat(1, 2)}));
    TSeries g = exp_series(F);
    CHECK(g.coeff(Monomial()) == KPoly(1));
    CHECK(log_series(g) == F);
}

TEST_CASE("derivative and json round trip") {
    TSeries F(6);
    F.add_term(Monomial::var({0}, 3), KPoly(rat(1, 12)));
    F.add_term(Monomial::var({0}) * Monomial::var({1}), kp_of({0, rat(-1, 2)}));
    TSeries d = d_dt(F, {0});
    CHECK(d.coeff(Monomial::var({0}, 2)) == KPoly(rat(1, 4)));
    CHECK(d.coeff(Monomial::var({1})) == kp_of({0, rat(-1, 2)}));
    CHECK(TSeries::from_json(F.to_json()) == F);
    CHECK_THROWS_AS(TSeries::from_json("{"), UsageError);
    CHECK(F.flip_k().coeff(Monomial::var({0}) * Monomial::var({1})) == kp_of({0, rat(1, 2)}));
}

TEST_CASE("numeric evaluation on a spectrum") {
    TSeries F(3);
    F.add_term(Monomial::var({0}, 3), KPoly(rat(1, 12)));
    // t0 = sum lambda^{-1/2}, one eigenvalue 4: t0 = 1/2
    CHECK(eval_at_spectrum(F, SpectrumSample{{4.0}, 0}, 0) == doctest::Approx(1.0 / 96));
}
