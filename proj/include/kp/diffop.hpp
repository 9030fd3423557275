#pragma once

#include <map>
#include <string>
#include <vector>

#include "kp/tseries.hpp"

namespace kp {

struct DiffTerm {
    KPoly coeff;
    Monomial mult;
    std::vector<HalfIndex> derivs;  // sorted ascending
};

class DiffOperator {
public:
    DiffOperator() = default;

    void add(const KPoly& c, const Monomial& mult, std::vector<HalfIndex> derivs);
    std::vector<DiffTerm> terms() const;
    size_t size() const { return t_.size(); }
    KPoly coeff(const Monomial& mult, std::vector<HalfIndex> derivs) const;

    DiffOperator& operator+=(const DiffOperator& o);
    DiffOperator scaled(const KPoly& s) const;
    DiffOperator flip_k() const;
    // drop terms whose multiplier weight exceeds w2
    DiffOperator truncated(int mult_w2) const;
    friend bool operator==(const DiffOperator& a, const DiffOperator& b) { return a.t_ == b.t_; }

    std::string str() const;
    std::string to_json() const;

private:
    using Key = std::pair<Monomial, std::vector<int>>;
    std::map<Key, KPoly> t_;
};

// out_w2 < 0 keeps the input's truncation weight
TSeries apply(const DiffOperator& op, const TSeries& a, int out_w2 = -1);

// J^(level)_m with all indices |i| <= max_power, normal ordered
DiffOperator build_J(int level, int m, int max_power);
// (1/4) J^(2)_{2n}, plus 1/16 for n = 0
DiffOperator L_op(int n, int max_power);

bool commutator_check(int n, int m, int w2);

}  // namespace kp
