#include "kp/reference.hpp"

namespace kp {

namespace {

KPoly kp_of(std::initializer_list<Rational> c) { return KPoly(std::vector<Rational>(c)); }

// t index given doubled: t_{1/2} -> 1, t_3 -> 6
Monomial mono(std::initializer_list<std::pair<int, int>> v) { return Monomial(std::vector<std::pair<int, int>>(v)); }

}  // namespace

TSeries reference_table() {
    TSeries F(9);
    auto add = [&](std::initializer_list<std::pair<int, int>> m, std::initializer_list<Rational> c) {
        F.add_term(mono(m), kp_of(c));
    };
    add({{0, 3}}, {rat(1, 12)});
    add({{2, 1}}, {rat(1, 48), 0, rat(1, 4)});
    add({{0, 1}, {1, 1}}, {0, rat(1, 2)});
    add({{0, 3}, {2, 1}}, {rat(1, 24)});
    add({{2, 2}}, {rat(1, 192), 0, rat(1, 16)});
    add({{0, 1}, {1, 1}, {2, 1}}, {0, rat(1, 4)});
    add({{1, 3}}, {0, rat(1, 24)});
    add({{0, 1}, {4, 1}}, {rat(1, 32), 0, rat(3, 8)});
    add({{0, 2}, {3, 1}}, {0, rat(1, 4)});
    add({{1, 1}, {3, 1}}, {0, 0, rat(1, 4)});
    add({{5, 1}}, {0, rat(1, 6), 0, rat(1, 6)});
    add({{0, 4}, {4, 1}}, {rat(1, 64)});
    add({{0, 3}, {5, 1}}, {0, rat(1, 6)});
    add({{0, 3}, {2, 2}}, {rat(1, 48)});
    add({{0, 2}, {6, 1}}, {rat(5, 128), 0, rat(15, 32)});
    add({{0, 2}, {1, 1}, {4, 1}}, {0, rat(3, 16)});
    add({{0, 2}, {2, 1}, {3, 1}}, {0, rat(1, 4)});
    add({{0, 1}, {7, 1}}, {0, rat(1, 2), 0, rat(1, 2)});
    add({{0, 1}, {1, 1}, {5, 1}}, {0, 0, rat(1, 12)});
    add({{0, 1}, {2, 1}, {4, 1}}, {rat(1, 32), 0, rat(3, 8)});
    add({{0, 1}, {3, 2}}, {0, 0, rat(1, 4)});
    add({{0, 1}, {1, 2}, {3, 1}}, {0, rat(1, 8)});
    add({{0, 1}, {1, 1}, {2, 2}}, {0, rat(1, 8)});
    add({{1, 1}, {6, 1}}, {0, rat(73, 448), 0, rat(43, 112)});
    add({{1, 2}, {4, 1}}, {0, 0, rat(3, 16)});
    add({{1, 1}, {2, 1}, {3, 1}}, {0, 0, rat(1, 4)});
    add({{2, 1}, {5, 1}}, {0, rat(1, 6), 0, rat(1, 6)});
    add({{2, 3}}, {rat(1, 576), 0, rat(1, 48)});
    add({{3, 1}, {4, 1}}, {0, rat(1, 8), 0, rat(1, 4)});
    add({{8, 1}}, {rat(105, 9216), 0, rat(607, 1152), 0, rat(169, 576)});
    add({{1, 3}, {2, 1}}, {0, rat(1, 24)});
    return F;
}

std::vector<Discrepancy> logged_discrepancies() {
    return {
        {mono({{0, 1}, {1, 1}, {5, 1}}), kp_of({0, 0, rat(1, 12)}), kp_of({0, 0, rat(1, 2)}), false,
         "three-point monomial; constraint tower only"},
        {mono({{1, 1}, {6, 1}}), kp_of({0, rat(73, 448), 0, rat(43, 112)}), kp_of({0, rat(15, 64), 0, rat(5, 16)}), false,
         "odd power sum p_7; outside the correlator dictionary"},
        {mono({{8, 1}}), kp_of({rat(105, 9216), 0, rat(607, 1152), 0, rat(169, 576)}),
         kp_of({rat(35, 3072), 0, rat(245, 384), 0, rat(35, 192)}), false,
         "odd power sum p_9; constant term agrees"},
    };
}

TSeries corrected_table() {
    TSeries F = reference_table();
    for (auto& d : logged_discrepancies()) F.add_term(d.monomial, d.derived - d.printed);
    return F;
}

std::map<std::pair<int, int>, KPoly> reference_twopoint(bool corrected) {
    std::map<std::pair<int, int>, KPoly> p{
        {{1, 2}, kp_of({0, 0, 1})},
        {{1, 5}, kp_of({0, 0, rat(1, 12)})},
        {{2, 4}, kp_of({0, 0, rat(7, 12), 0, rat(1, 4)})},
        {{3, 3}, kp_of({0, 0, rat(3, 4), 0, rat(1, 4)})},
    };
    // derived k^4/12 + k^2/4; the dictionary sends it to t_{1/2} t_{9/2}, which the weight-6 tower confirms
    if (corrected) p[{1, 5}] = kp_of({0, 0, rat(1, 4), 0, rat(1, 12)});
    return p;
}

}  // namespace kp
