#include "doctest.h"
#include "kp/correlators.hpp"

using namespace kp;

namespace {
KPoly kp_of(std::initializer_list<Rational> c) { return KPoly(std::vector<Rational>(c)); }
}  // namespace

TEST_CASE("Gaussian moments by residues") {
    CHECK(gaussian_moment(1) == kp_of({0, 0, 1}));
    CHECK(gaussian_moment(2) == kp_of({0, 1, 0, 2}));
    CHECK(gaussian_moment(3) == kp_of({0, 0, 10, 0, 5}));
    CHECK(gaussian_moment(4) == kp_of({0, 21, 0, 70, 0, 14}));
    CHECK_THROWS_AS(gaussian_moment(0), UsageError);
}

TEST_CASE("Wick route agrees with residues") {
    for (int j = 1; j <= 6; ++j) CHECK(wick_multitrace({{2 * j}}) == gaussian_moment(j));
    // odd total power vanishes
    CHECK(wick_multitrace({{3}}).is_zero());
    // <(tr M)^2> = P
    CHECK(wick_multitrace({{1, 1}}) == kp_of({0, 1}));
}

TEST_CASE("replica limit") {
    CHECK(replica_sinh({{3, 3}}) == 3);
    CHECK(replica_sinh({{3, 3, 2}}) == 18);
    CHECK(replica_sinh({{4}}) == 1);
    CHECK(wick_multitrace({{3, 3}}).coeff(1) == 3);
    CHECK(wick_multitrace({{3, 3, 2}}).coeff(1) == 18);
}

TEST_CASE("U(s) is the generating function of the moments") {
    auto U = gaussian_U(8);
    // s^{2j} / (2j)!
    Rational f = 1;
    for (int n = 1; n <= 8; ++n) {
        f *= n;
        if (n % 2 == 0) CHECK(U[n] == gaussian_moment(n / 2) * (1 / f));
        else CHECK(U[n].is_zero());
    }
}

TEST_CASE("one- and two-point functions") {
    auto one = kp_onepoint(6);
    CHECK(one[3] == kp_of({0, rat(-1, 6), 0, rat(-1, 6)}));
    CHECK(one[6] == kp_of({0, rat(1, 60), 0, rat(5, 144), 0, rat(1, 240)}));
    auto two = kp_twopoint(6);
    CHECK(two[{1, 2}] == kp_of({0, 0, 1}));
    CHECK(two[{2, 1}] == two[{1, 2}]);
    CHECK(two[{3, 3}] == kp_of({0, 0, rat(-3, 4), 0, rat(-1, 4)}));
    CHECK(two[{2, 4}] == kp_of({0, 0, rat(-7, 12), 0, rat(-1, 4)}));
}

TEST_CASE("six displays") {
    auto r = six_term_check();
    CHECK(r.labels.size() == 6);
    CHECK(r.raw_total == kp_of({0, rat(2, 3), 0, rat(2, 3)}));
    CHECK(r.total == kp_of({0, rat(1, 6), 0, rat(1, 6)}));
}

TEST_CASE("s to t dictionary") {
    TSeries F = s_to_t(kp_onepoint(6), kp_twopoint(6), 6);
    CHECK(F.coeff(Monomial::var({5})) == kp_of({0, rat(1, 6), 0, rat(1, 6)}));
    CHECK(F.coeff(Monomial::var({1}) * Monomial::var({3})) == kp_of({0, 0, rat(1, 4)}));
    CHECK(Dictionary::point(3) == -2);
    CHECK(Dictionary::global(2) == rat(-1, 4));
}

TEST_CASE("laurent residue") {
    // res_u (u^-2 + 3 u^-1 + u) = 3
    LaurentPoly f = LaurentPoly::contour_var(1, 0, -1, 0, -2) + LaurentPoly::contour_var(1, 0, -1, 0, -1).scaled(3) +
                    LaurentPoly::contour_var(1, 0, -1, 0, 1);
    LaurentPoly r = residue(f, 0);
    CHECK(r.coeff({0}) == 3);
    CHECK(r.terms().size() == 1);
}
