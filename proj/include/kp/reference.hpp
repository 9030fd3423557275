#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kp/tseries.hpp"

namespace kp {

// The published free-energy table through weight 9/2, as printed (k sign of the table convention).
TSeries reference_table();

// Entries where the derived coefficient differs from the printed one.
struct Discrepancy {
    Monomial monomial;
    KPoly printed;
    KPoly derived;
    bool correlator_reachable;  // one/two-point monomial in even power sums only
    std::string note;
};
std::vector<Discrepancy> logged_discrepancies();

// printed table with the logged corrections applied
TSeries corrected_table();

// Published two-point coefficients keyed by (power of s1, power of s2), in the published sign
// convention (-1)^{n+1} U(-s); corrected = true applies the logged (1,5) entry.
std::map<std::pair<int, int>, KPoly> reference_twopoint(bool corrected = false);

}  // namespace kp
