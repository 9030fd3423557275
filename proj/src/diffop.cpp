#include "kp/diffop.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace kp {

void DiffOperator::add(const KPoly& c, const Monomial& mult, std::vector<HalfIndex> derivs) {
    if (c.is_zero()) return;
    std::vector<int> d;
    for (auto h : derivs) d.push_back(h.twice);
    std::sort(d.begin(), d.end());
    auto [it, fresh] = t_.try_emplace({mult, d}, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) t_.erase(it);
    }
}

std::vector<DiffTerm> DiffOperator::terms() const {
    std::vector<DiffTerm> r;
    for (auto& [key, c] : t_) {
        DiffTerm t{c, key.first, {}};
        for (int d : key.second) t.derivs.push_back({d});
        r.push_back(std::move(t));
    }
    return r;
}

KPoly DiffOperator::coeff(const Monomial& mult, std::vector<HalfIndex> derivs) const {
    std::vector<int> d;
    for (auto h : derivs) d.push_back(h.twice);
    std::sort(d.begin(), d.end());
    auto it = t_.find({mult, d});
    return it == t_.end() ? KPoly() : it->second;
}

DiffOperator& DiffOperator::operator+=(const DiffOperator& o) {
    for (auto& t : o.terms()) add(t.coeff, t.mult, t.derivs);
    return *this;
}

DiffOperator DiffOperator::scaled(const KPoly& s) const {
    DiffOperator r;
    for (auto& t : terms()) r.add(t.coeff * s, t.mult, t.derivs);
    return r;
}

DiffOperator DiffOperator::flip_k() const {
    DiffOperator r;
    for (auto& t : terms()) r.add(t.coeff.flip_k(), t.mult, t.derivs);
    return r;
}

DiffOperator DiffOperator::truncated(int mult_w2) const {
    DiffOperator r;
    for (auto& t : terms())
        if (t.mult.weight2() <= mult_w2) r.add(t.coeff, t.mult, t.derivs);
    return r;
}

std::string DiffOperator::str() const {
    std::ostringstream os;
    bool first = true;
    for (auto& t : terms()) {
        os << (first ? "" : " + ") << "(" << t.coeff.str() << ")";
        first = false;
        if (!t.mult.empty()) os << "·" << t.mult.str();
        for (auto d : t.derivs) os << "·∂" << Monomial::var(d).str();
    }
    return first ? "0" : os.str();
}

std::string DiffOperator::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (auto& t : terms()) {
        nlohmann::json mono = nlohmann::json::array(), ds = nlohmann::json::array();
        for (auto& [n, e] : t.mult.items()) mono.push_back({n, e});
        for (auto d : t.derivs) ds.push_back(d.twice);
        j.push_back({{"coeff", t.coeff.to_strings()}, {"multiplier", mono}, {"derivatives", ds}});
    }
    return j.dump();
}

TSeries apply(const DiffOperator& op, const TSeries& a, int out_w2) {
    if (out_w2 < 0) out_w2 = a.w2();
    TSeries r(out_w2);
    for (auto& t : op.terms()) {
        int mw = t.mult.weight2();
        if (mw > out_w2) continue;
        TSeries d = a;
        for (auto h : t.derivs) d = d_dt(d, h);
        for (auto& [m, c] : d.terms())
            if (mw + m.weight2() <= out_w2) r.add_term(t.mult * m, c * t.coeff);
    }
    return r;
}

namespace {

// J^(1)_i: i>0 is i·∂/∂p_i, i<0 is the multiplier p_{-i}
void current_product(const std::vector<int>& idx, const KPoly& c, DiffOperator& out) {
    Rational coeff = 1;
    std::vector<int> mult;
    std::vector<HalfIndex> ds;
    for (int i : idx) {
        if (i < 0)
            mult.push_back(-i);
        else {
            coeff *= i;
            ds.push_back(HalfIndex::of_power(i));
        }
    }
    out.add(c * coeff, Monomial::from_powers(mult), ds);
}

}  // namespace

DiffOperator build_J(int level, int m, int max_power) {
    if (level < 1 || level > 3) throw UsageError("J level must be 1, 2 or 3");
    DiffOperator r;
    std::vector<int> idx(level);
    std::function<void(int, int)> rec = [&](int pos, int rest) {
        if (pos == level - 1) {
            if (rest == 0 || std::abs(rest) > max_power) return;
            idx[pos] = rest;
            current_product(idx, KPoly(1), r);
            return;
        }
        for (int i = -max_power; i <= max_power; ++i) {
            if (i == 0) continue;
            idx[pos] = i;
            rec(pos + 1, rest - i);
        }
    };
    rec(0, m);
    return r;
}

DiffOperator L_op(int n, int max_power) {
    DiffOperator L = build_J(2, 2 * n, max_power).scaled(KPoly(rat(1, 4)));
    // twisted-sector ground state; without it [L_1, L_-1] misses 2L_0 by 1/8
    if (n == 0) L.add(KPoly(rat(1, 16)), Monomial(), {});
    return L;
}

bool commutator_check(int n, int m, int w2) {
    int cut = w2 + 2 * (std::abs(n) + std::abs(m)) + 4;
    int big = w2 + 4 * (std::abs(n) + std::abs(m)) + 8;
    DiffOperator Ln = L_op(n, cut), Lm = L_op(m, cut), Lnm = L_op(n + m, cut);
    // every monomial in p_1..p_w2 with weight <= w2
    std::vector<Monomial> basis{Monomial()};
    std::function<void(int, int, std::vector<int>&)> gen = [&](int maxp, int left, std::vector<int>& cur) {
        for (int j = std::min(maxp, left); j >= 1; --j) {
            cur.push_back(j);
            basis.push_back(Monomial::from_powers(cur));
            gen(j, left - j, cur);
            cur.pop_back();
        }
    };
    std::vector<int> cur;
    gen(w2, w2, cur);
    for (auto& mono : basis) {
        TSeries x(big);
        x.add_term(mono, KPoly(1));
        TSeries lhs = apply(Ln, apply(Lm, x)) - apply(Lm, apply(Ln, x));
        TSeries rhs = apply(Lnm, x).scaled(KPoly(Rational(n - m)));
        if (!(lhs - rhs).is_zero()) return false;
    }
    return true;
}

}  // namespace kp
