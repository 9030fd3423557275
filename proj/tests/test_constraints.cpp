#include "doctest.h"
#include "kp/constraints.hpp"

using namespace kp;

namespace {
KPoly kp_of(std::initializer_list<Rational> c) { return KPoly(std::vector<Rational>(c)); }
Monomial t(int twice) { return Monomial::var({twice}); }
}  // namespace

TEST_CASE("J operators at level 2") {
    DiffOperator Jm2 = build_J(2, -2, 8);
    CHECK(Jm2.coeff(t(0) * t(0), {}) == KPoly(1));
    CHECK(Jm2.coeff(t(2), {{0}}) == KPoly(2));
    CHECK(Jm2.coeff(t(4), {{2}}) == KPoly(6));
    DiffOperator J0 = build_J(2, 0, 8);
    CHECK(J0.coeff(t(2), {{2}}) == KPoly(6));
    CHECK(J0.coeff(t(1), {{1}}) == KPoly(4));
    DiffOperator Jm1 = build_J(2, -1, 8);
    CHECK(Jm1.coeff(t(1), {{0}}) == KPoly(2));
    CHECK_THROWS_AS(build_J(4, 0, 3), UsageError);
}

TEST_CASE("apply") {
    TSeries x(6);
    x.add_term(t(2), KPoly(1));
    TSeries y = apply(build_J(2, 0, 8), x);
    CHECK(y.coeff(t(2)) == KPoly(6));
    DiffOperator d;
    d.add(KPoly(1), Monomial(), {{0}});
    d.add(KPoly(3), t(0), {{0}, {2}});
    CHECK(apply(d, TSeries::one(6)).is_zero());
    // linearity
    TSeries a(6), b(6);
    a.add_term(t(0) * t(0) * t(0), KPoly(rat(1, 12)));
    b.add_term(t(0) * t(1), kp_of({0, 1}));
    DiffOperator L = build_J(2, -2, 8);
    CHECK(apply(L, a + b) == apply(L, a) + apply(L, b));
}

TEST_CASE("Virasoro commutators close") {
    for (int n = -1; n <= 2; ++n)
        for (int m = -1; m <= 2; ++m) {
            CAPTURE(n);
            CAPTURE(m);
            CHECK(commutator_check(n, m, 4));
        }
}

TEST_CASE("first constraints at P = 5") {
    DeriveOptions o;
    o.max_w2 = 4;
    auto tw = derive_tower({1, 2}, 5, o);
    const DiffOperator& O1 = tw[0].op;
    CHECK(O1.coeff(Monomial(), {{0}}) == KPoly(-1));
    CHECK(O1.coeff(t(0) * t(0), {}) == KPoly(rat(1, 4)));
    CHECK(O1.coeff(t(1), {}) == kp_of({0, rat(-1, 2)}));
    CHECK(O1.coeff(t(2), {{0}}) == KPoly(rat(1, 2)));
    const DiffOperator& O2 = tw[1].op;
    CHECK(O2.coeff(Monomial(), {{1}}) == KPoly(-2));
    // residual of the first equation on F = 0 is its inhomogeneous part
    TSeries r = residual(tw[0], TSeries(3));
    CHECK(r.coeff(t(0) * t(0)) == KPoly(rat(1, 4)));
    CHECK(r.coeff(t(1)) == kp_of({0, rat(-1, 2)}));
    CHECK(r.size() == 2);
}

TEST_CASE("too small a matrix is reported") {
    DeriveOptions o;
    o.max_w2 = 3;
    CHECK_THROWS_AS(derive_tower({1, 2, 3}, 3, o), InstabilityError);
    CHECK_THROWS_AS(derive_constraint(1, 1, o), UsageError);
}

TEST_CASE("free energy through weight 3/2") {
    TSeries F = table_convention(free_energy(3));
    TSeries want(3);
    want.add_term(t(0) * t(0) * t(0), KPoly(rat(1, 12)));
    want.add_term(t(2), kp_of({rat(1, 48), 0, rat(1, 4)}));
    want.add_term(t(0) * t(1), kp_of({0, rat(1, 2)}));
    CHECK(F == want);
    CHECK(free_energy(0).is_zero());
}

TEST_CASE("solver reports under-determined monomials") {
    DeriveOptions o;
    o.max_w2 = 4;
    auto tw = derive_tower({1, 2}, 5, o);
    try {
        solve_F(3, tw);
        FAIL("expected SolveError");
    } catch (const SolveError& e) {
        CHECK(e.kind == SolveError::Undetermined);
        REQUIRE(e.undetermined.size() == 1);
        CHECK(e.undetermined[0] == t(2));
    }
}

TEST_CASE("solution annihilated by its tower; redundant equations change nothing") {
    DeriveOptions o;
    o.max_w2 = 6;
    auto tw = derive_tower({1, 2, 3, 4, 5, 6}, 5, o);
    TSeries F = solve_F(6, tw);
    for (auto& eq : tw) {
        TSeries r = residual(eq, F).truncated(eq.validity_w2());
        CHECK(r.is_zero());
    }
    auto more = tw;
    for (auto& eq : derive_tower({1, 2, 3}, 6, o)) more.push_back(eq);
    CHECK(solve_F(6, more) == F);
}
