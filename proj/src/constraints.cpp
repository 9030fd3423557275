#include "kp/constraints.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "kp/parallel.hpp"

namespace kp {

namespace {

// Truncated Laurent series in y_c, lowest stored power LO
constexpr int LO = -8;

struct Ser {
    int hi = 0;
    std::vector<KPoly> c;  // empty means zero

    Ser() = default;
    explicit Ser(int h) : hi(h) {}
    static Ser mono(int p, const KPoly& v, int h) {
        Ser s(h);
        if (p <= h && !v.is_zero()) {
            s.c.resize(h - LO + 1);
            s.c[p - LO] = v;
        }
        return s;
    }
    bool zero() const {
        for (auto& x : c)
            if (!x.is_zero()) return false;
        return true;
    }
    const KPoly* at(int p) const {
        if (c.empty() || p < LO || p > hi) return nullptr;
        return &c[p - LO];
    }
    int val() const {
        for (size_t i = 0; i < c.size(); ++i)
            if (!c[i].is_zero()) return static_cast<int>(i) + LO;
        return hi + 1;
    }
};

Ser operator+(const Ser& a, const Ser& b) {
    if (a.c.empty()) return b;
    if (b.c.empty()) return a;
    Ser r = a;
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
    return r;
}

Ser operator*(const Ser& a, const Ser& b) {
    Ser r(a.hi);
    if (a.c.empty() || b.c.empty()) return r;
    r.c.resize(a.hi - LO + 1);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i].is_zero()) continue;
        int pi = static_cast<int>(i) + LO;
        for (size_t j = 0; j < b.c.size(); ++j) {
            if (b.c[j].is_zero()) continue;
            int p = pi + static_cast<int>(j) + LO;
            if (p > a.hi) break;
            if (p < LO) throw std::logic_error("series valuation below storage floor");
            r.c[p - LO].add_mul(a.c[i], b.c[j]);
        }
    }
    return r;
}

Ser scale(const Ser& a, const KPoly& s) {
    Ser r(a.hi);
    if (a.c.empty() || s.is_zero()) return r;
    r.c.resize(a.c.size());
    for (size_t i = 0; i < a.c.size(); ++i)
        if (!a.c[i].is_zero()) r.c[i] = a.c[i] * s;
    return r;
}

Ser inv(const Ser& a) {
    int v = a.val();
    if (v > a.hi) throw std::logic_error("inverting zero series");
    const KPoly& lead = *a.at(v);
    if (lead.degree() != 0) throw std::logic_error("leading coefficient depends on k");
    Rational a0 = lead.coeff(0);
    int n = a.hi + v;  // result powers -v .. hi
    std::vector<KPoly> b(n + 1), r(n + 1);
    for (int j = 0; j <= n; ++j)
        if (auto p = a.at(v + j)) b[j] = *p * (1 / a0);
    r[0] = KPoly(Rational(1));
    for (int m = 1; m <= n; ++m) {
        KPoly s;
        for (int j = 1; j <= m; ++j) s.add_mul(b[j], r[m - j]);
        r[m] = -s;
    }
    Ser out(a.hi);
    out.c.resize(a.hi - LO + 1);
    for (int m = 0; m <= n; ++m)
        if (-v + m >= LO) out.c[-v + m - LO] = r[m] * (1 / a0);
    return out;
}

Ser operator-(const Ser& a) { return scale(a, KPoly(-1)); }
Ser operator-(const Ser& a, const Ser& b) { return a + (-b); }
Ser pow(const Ser& a, int n) {
    Ser r = Ser::mono(0, KPoly(1), a.hi);
    for (int i = 0; i < n; ++i) r = r * a;
    return r;
}

// homogeneous components indexed by total y-degree D
constexpr int DLO = -4;
struct Graded {
    std::vector<Ser> g;
    Ser* get(int D) { return (D - DLO) < static_cast<int>(g.size()) ? &g[D - DLO] : nullptr; }
    void add(int D, const Ser& s) {
        if (s.c.empty()) return;
        if (D < DLO) throw std::logic_error("degree below floor");
        if (static_cast<int>(g.size()) <= D - DLO) g.resize(D - DLO + 1);
        g[D - DLO] = g[D - DLO] + s;
    }
    void add(const Graded& o) {
        for (size_t i = 0; i < o.g.size(); ++i) add(static_cast<int>(i) + DLO, o.g[i]);
    }
    bool empty() const {
        for (auto& s : g)
            if (!s.c.empty()) return false;
        return true;
    }
};

Graded single(int D, const Ser& s) {
    Graded r;
    r.add(D, s);
    return r;
}

Graded gmul(const Graded& a, const Graded& b, int dcap) {
    Graded r;
    for (size_t i = 0; i < a.g.size(); ++i) {
        if (a.g[i].c.empty()) continue;
        for (size_t j = 0; j < b.g.size(); ++j) {
            if (b.g[j].c.empty()) continue;
            int D = static_cast<int>(i + j) + 2 * DLO;
            if (D > dcap) continue;
            r.add(D, a.g[i] * b.g[j]);
        }
    }
    return r;
}

using Gamma = std::vector<int>;  // sorted p-indices of the g-derivative
using GMap = std::map<Gamma, Graded>;

void set_partitions(int n, const std::function<void(const std::vector<std::vector<int>>&)>& f) {
    std::vector<std::vector<int>> blocks;
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            f(blocks);
            return;
        }
        for (size_t b = 0; b < blocks.size(); ++b) {
            blocks[b].push_back(i);
            rec(i + 1);
            blocks[b].pop_back();
        }
        blocks.push_back({i});
        rec(i + 1);
        blocks.pop_back();
    };
    rec(0);
}

class Evaluator {
public:
    Evaluator(const std::vector<Rational>& rest, int dmax, int hi) : P_(rest.size() + 1), dmax_(dmax), hi_(hi) {
        dcap_ = dmax + 12;
        y_.push_back(Ser::mono(1, KPoly(1), hi));
        x_.push_back(Ser::mono(-1, KPoly(1), hi));
        for (auto& r : rest) {
            y_.push_back(Ser::mono(0, KPoly(r), hi));
            x_.push_back(Ser::mono(0, KPoly(1 / r), hi));
        }
        for (auto& x : x_) lam_.push_back(x * x);
        q_ = KPoly(std::vector<Rational>{rat(-1, 4), rat(1, 2)});
    }

    GMap run() {
        GMap out;
        auto addterm = [&](const Graded& coef, const std::vector<int>& idx) {
            for (auto& [g, v] : conj(idx)) {
                Graded w = gmul(coef, v, dmax_);
                if (!w.empty()) out[g].add(w);
            }
        };
        Ser one = Ser::mono(0, KPoly(1), hi_);
        addterm(single(0, -one), {0, 0, 0});
        std::vector<Ser> fcd(P_);
        for (int d = 1; d < P_; ++d) fcd[d] = inv(lam_[0] - lam_[d]);
        Ser cc;          // coefficient of d/dlambda_c at degree 4
        std::vector<Ser> dd(P_);  // coefficient of d/dlambda_d at degree 4
        for (int d = 1; d < P_; ++d) {
            const Ser& f = fcd[d];
            addterm(single(2, scale(f, KPoly(-2))), {0, 0});
            addterm(single(2, f), {0, d});
            addterm(single(2, f), {d, d});
            Ser f2 = f * f;
            cc = cc + f2;
            dd[d] = dd[d] - f2;
        }
        for (int e = 1; e < P_; ++e)
            for (int d = 1; d < P_; ++d) {
                if (d == e) continue;
                Ser f = scale(fcd[e] * inv(lam_[e] - lam_[d]), KPoly(2));
                cc = cc - f;
                dd[e] = dd[e] + f;
            }
        Graded cgr = single(4, cc);
        cgr.add(-2, lam_[0]);
        addterm(cgr, {0});
        for (int d = 1; d < P_; ++d) addterm(single(4, dd[d]), {d});
        out[{}].add(0, Ser::mono(0, KPoly(std::vector<Rational>{Rational(P_), 1}), hi_));
        return out;
    }

private:
    Ser c(const Rational& v) const { return Ser::mono(0, KPoly(v), hi_); }

    // mixed derivatives of log(prod (sqrt l_i + sqrt l_j)^{-1/2}) for one ordered pair
    Graded H(int a, int b, int i, int j) {
        if (a < b || (a == 0)) return H(b, a, j, i);
        const Ser &u = x_[i], &v = x_[j];
        Ser s = u + v;
        if (a == 1 && b == 0) return single(2, scale(inv(u * s), KPoly(rat(-1, 2))));
        if (a == 2 && b == 0)
            return single(4, scale((scale(u, KPoly(2)) + v) * inv(pow(u, 3) * pow(s, 2)), KPoly(rat(1, 4))));
        if (a == 1 && b == 1) return single(4, scale(inv(u * v * pow(s, 2)), KPoly(rat(1, 4))));
        if (a == 3 && b == 0) {
            Ser num = scale(u * u, KPoly(8)) + scale(u * v, KPoly(9)) + scale(v * v, KPoly(3));
            return single(6, scale(num * inv(pow(u, 5) * pow(s, 3)), KPoly(rat(-1, 8))));
        }
        if (a == 2 && b == 1) {
            Ser num = scale(u, KPoly(3)) + v;
            return single(6, scale(num * inv(pow(u, 3) * v * pow(s, 3)), KPoly(rat(-1, 8))));
        }
        throw std::logic_error("pair derivative order too high");
    }

    Graded sder(int n, int i) {
        const Ser& y = y_[i];
        Graded r;
        if (n == 1) {
            r.add(-1, x_[i]);
            r.add(2, scale(y * y, q_));
        } else if (n == 2) {
            r.add(1, scale(y, KPoly(rat(1, 2))));
            r.add(4, scale(pow(y, 4), -q_));
        } else {
            r.add(3, scale(pow(y, 3), KPoly(rat(-1, 4))));
            r.add(6, scale(pow(y, 6), q_ * Rational(2)));
        }
        return r;
    }

    const Graded& S(std::vector<int> idx) {
        std::sort(idx.begin(), idx.end());
        auto it = scache_.find(idx);
        if (it != scache_.end()) return it->second;
        std::vector<int> ds = idx;
        ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
        Graded r;
        if (ds.size() == 1) {
            int i = ds[0], n = static_cast<int>(idx.size());
            r = sder(n, i);
            for (int j = 0; j < P_; ++j)
                if (j != i) r.add(H(n, 0, i, j));
        } else if (ds.size() == 2) {
            int i = ds[0], j = ds[1];
            r = H(static_cast<int>(std::count(idx.begin(), idx.end(), i)),
                  static_cast<int>(std::count(idx.begin(), idx.end(), j)), i, j);
        }
        return scache_[idx] = r;
    }

    // derivative of p_a = sum y^a, n times in the same lambda_i
    Graded dp(int n, int i, int a) {
        Rational ff = 1, e = rat(-a, 2);
        for (int t = 0; t < n; ++t) ff *= e - t;
        return single(a + 2 * n, scale(pow(y_[i], a + 2 * n), KPoly(ff)));
    }

    GMap chain(const std::vector<int>& idx) {
        GMap out;
        if (idx.empty()) {
            out[{}] = single(0, c(1));
            return out;
        }
        int n = static_cast<int>(idx.size());
        set_partitions(n, [&](const std::vector<std::vector<int>>& blocks) {
            std::vector<std::pair<int, int>> bl;
            for (auto& b : blocks) {
                for (int t : b)
                    if (idx[t] != idx[b[0]]) return;
                bl.push_back({static_cast<int>(b.size()), idx[b[0]]});
            }
            std::vector<int> as(bl.size(), 1);
            while (true) {
                Graded v = single(0, c(1));
                for (size_t t = 0; t < bl.size(); ++t) v = gmul(v, dp(bl[t].first, bl[t].second, as[t]), dcap_);
                if (!v.empty()) {
                    Gamma g = as;
                    std::sort(g.begin(), g.end());
                    out[g].add(v);
                }
                size_t t = 0;
                while (t < as.size() && ++as[t] > dmax_) as[t++] = 1;
                if (t == as.size()) break;
            }
        });
        return out;
    }

    Graded bell(const std::vector<int>& idx) {
        Graded r;
        if (idx.empty()) return single(0, c(1));
        set_partitions(static_cast<int>(idx.size()), [&](const std::vector<std::vector<int>>& blocks) {
            Graded v = single(0, c(1));
            for (auto& b : blocks) {
                std::vector<int> sub;
                for (int t : b) sub.push_back(idx[t]);
                v = gmul(v, S(sub), dcap_);
            }
            r.add(v);
        });
        return r;
    }

    // e^{-S} d_{i1}..d_{ir} (e^S g), split by g-derivative
    const GMap& conj(const std::vector<int>& idx) {
        auto it = ccache_.find(idx);
        if (it != ccache_.end()) return it->second;
        GMap out;
        int n = static_cast<int>(idx.size());
        for (int mask = 0; mask < (1 << n); ++mask) {
            std::vector<int> A, B;
            for (int t = 0; t < n; ++t) (mask >> t & 1 ? A : B).push_back(idx[t]);
            Graded bv = bell(A);
            for (auto& [g, cv] : chain(B)) {
                Graded v = gmul(bv, cv, dcap_);
                if (!v.empty()) out[g].add(v);
            }
        }
        return ccache_[idx] = out;
    }

    int P_, dmax_, hi_, dcap_;
    std::vector<Ser> y_, x_, lam_;
    KPoly q_;
    std::map<std::vector<int>, Graded> scache_;
    std::map<std::vector<int>, GMap> ccache_;
};

// power-sum product basis: positive parts <= npos factors, up to nneg inverse factors
std::vector<std::vector<int>> fit_basis(int rd, int npos, int nneg, int dmax) {
    std::set<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int, int, int, std::vector<int>&)> negs;
    std::function<void(int, int, int)> pos = [&](int start, int left, int sum) {
        // close the positive part, then add inverse factors
        std::vector<int> tmp = cur;
        negs(1, nneg, sum, tmp);
        if (left == 0) return;
        for (int j = start; j <= dmax && sum + j <= dmax; ++j) {
            cur.push_back(j);
            pos(j, left - 1, sum + j);
            cur.pop_back();
        }
    };
    negs = [&](int start, int left, int sum, std::vector<int>& v) {
        if (sum == rd) {
            std::vector<int> s = v;
            std::sort(s.begin(), s.end());
            out.insert(s);
        }
        if (left == 0) return;
        for (int j = start; j <= dmax; ++j) {
            if (sum - j < rd) break;
            v.push_back(-j);
            negs(j, left - 1, sum - j, v);
            v.pop_back();
        }
    };
    pos(1, npos, 0);
    return {out.begin(), out.end()};
}

// row reduction of [A | B]; returns false if rank deficient or inconsistent
struct FitResult {
    bool ok = true;
    std::string why;
    std::vector<std::vector<Rational>> x;  // [basis][rhs column]
};

FitResult solve_fit(std::vector<std::vector<Rational>> A, std::vector<std::vector<Rational>> B) {
    FitResult res;
    size_t rows = A.size(), nb = A.empty() ? 0 : A[0].size(), nr = B.empty() ? 0 : B[0].size();
    size_t r = 0;
    std::vector<size_t> piv;
    for (size_t col = 0; col < nb && r < rows; ++col) {
        size_t p = r;
        while (p < rows && A[p][col] == 0) ++p;
        if (p == rows) {
            res.ok = false;
            res.why = "rank deficient";
            return res;
        }
        std::swap(A[p], A[r]);
        std::swap(B[p], B[r]);
        Rational inv = 1 / A[r][col];
        for (size_t j = col; j < nb; ++j) A[r][j] *= inv;
        for (size_t j = 0; j < nr; ++j) B[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][col] == 0) continue;
            Rational f = A[i][col];
            for (size_t j = col; j < nb; ++j) A[i][j] -= f * A[r][j];
            for (size_t j = 0; j < nr; ++j) B[i][j] -= f * B[r][j];
        }
        piv.push_back(col);
        ++r;
    }
    if (piv.size() < nb) {
        res.ok = false;
        res.why = "rank deficient";
        return res;
    }
    for (size_t i = r; i < rows; ++i)
        for (size_t j = 0; j < nr; ++j)
            if (B[i][j] != 0) {
                res.ok = false;
                res.why = "inconsistent";
                return res;
            }
    res.x.assign(nb, std::vector<Rational>(nr));
    for (size_t i = 0; i < nb; ++i) res.x[i] = B[i];
    return res;
}

}  // namespace

std::string ConstraintEq::to_json() const {
    nlohmann::json j;
    j["half_order"] = half_order;
    j["derived_at"] = {{"P", P}, {"complete_through_weight", half_str(validity_w2())}};
    j["terms"] = nlohmann::json::parse(op.to_json());
    return j.dump();
}

std::vector<ConstraintEq> derive_tower(const std::vector<int>& orders, int P, const DeriveOptions& opt) {
    if (P < 2) throw UsageError("derive_constraint needs P >= 2");
    int maxm = 0;
    for (int m : orders) {
        if (m < 1 || m > opt.max_w2) throw UsageError("order out of range");
        maxm = std::max(maxm, m);
    }
    const int dmax = opt.max_w2;
    const int hi = maxm + opt.series_margin;

    // group (gamma length, rest degree) -> basis
    std::map<std::pair<int, int>, std::vector<std::vector<int>>> bases;
    size_t nbmax = 0;
    for (int l = 0; l <= 3; ++l)
        for (int rd = 0; rd <= dmax; ++rd) {
            auto b = fit_basis(rd, 3 - l, opt.max_negative, dmax);
            nbmax = std::max(nbmax, b.size());
            bases[{l, rd}] = std::move(b);
        }
    size_t npts = nbmax + opt.extra_points;

    std::mt19937 rng(opt.seed + 7919u * P);
    std::uniform_int_distribution<int> pick(1, std::max(60, 4 * P));
    std::vector<std::vector<Rational>> pts;
    for (size_t it = 0; it < npts; ++it) {
        std::vector<Rational> rest;
        std::set<int> used;
        while (static_cast<int>(rest.size()) < P - 1) {
            int v = pick(rng);
            if (used.insert(v).second) rest.push_back(Rational(v));
        }
        pts.push_back(rest);
    }
    std::vector<GMap> vals(npts);
    parallel_for(npts, [&](size_t i) { vals[i] = Evaluator(pts[i], dmax, hi).run(); });

    // power sums of the rest configuration
    std::vector<std::map<int, Rational>> psum(npts);
    for (size_t i = 0; i < npts; ++i)
        for (int j = -dmax; j <= dmax; ++j) {
            if (j == 0) continue;
            Rational s = 0;
            for (auto& r : pts[i]) {
                Rational t = 1;
                Rational base = j > 0 ? r : 1 / r;
                for (int e = 0; e < std::abs(j); ++e) t *= base;
                s += t;
            }
            psum[i][j] = s;
        }

    // collect keys
    struct Key {
        Gamma g;
        int D, n;
        bool operator<(const Key& o) const { return std::tie(g, D, n) < std::tie(o.g, o.D, o.n); }
    };
    std::set<Key> keys;
    for (auto& v : vals)
        for (auto& [g, gr] : v)
            for (size_t di = 0; di < gr.g.size(); ++di) {
                int D = static_cast<int>(di) + DLO;
                const Ser& s = gr.g[di];
                for (size_t pi = 0; pi < s.c.size(); ++pi) {
                    if (s.c[pi].is_zero()) continue;
                    int n = static_cast<int>(pi) + LO;
                    if (n < 1 || n > maxm) continue;
                    if (D - n >= 0) keys.insert({g, D, n});
                }
            }

    std::map<std::pair<int, int>, std::vector<Key>> groups;
    for (auto& k : keys) groups[{static_cast<int>(k.g.size()), k.D - k.n}].push_back(k);

    // positive part: (n, gamma, positive multiset) -> coefficient
    std::map<std::tuple<int, Gamma, std::vector<int>>, KPoly> pos;
    const int kdeg = 5;
    for (auto& [lr, ks] : groups) {
        auto bit = bases.find(lr);
        if (bit == bases.end()) throw InstabilityError("no fit basis for derivative count " + std::to_string(lr.first));
        auto& basis = bit->second;
        std::vector<std::vector<Rational>> A(npts), B(npts);
        for (size_t i = 0; i < npts; ++i) {
            for (auto& bb : basis) {
                Rational v = 1;
                for (int j : bb) v *= psum[i][j];
                A[i].push_back(v);
            }
            for (auto& k : ks) {
                KPoly val;
                auto git = vals[i].find(k.g);
                if (git != vals[i].end())
                    if (auto* s = const_cast<Graded&>(git->second).get(k.D))
                        if (auto* c = s->at(k.n)) val = *c;
                if (val.degree() >= kdeg) throw std::logic_error("k-degree exceeds fit columns");
                for (int e = 0; e < kdeg; ++e) B[i].push_back(val.coeff(e));
            }
        }
        FitResult fr = solve_fit(A, B);
        if (!fr.ok) {
            std::ostringstream os;
            os << "P=" << P << ": coefficient fit " << fr.why << " for " << lr.first
               << " derivative(s) at rest degree " << lr.second << "; increase P";
            throw InstabilityError(os.str());
        }
        for (size_t b = 0; b < basis.size(); ++b) {
            bool positive = std::all_of(basis[b].begin(), basis[b].end(), [](int j) { return j > 0; });
            for (size_t q = 0; q < ks.size(); ++q) {
                std::vector<Rational> co(kdeg);
                for (int e = 0; e < kdeg; ++e) co[e] = fr.x[b][q * kdeg + e];
                KPoly kp(co);
                if (kp.is_zero() || !positive) continue;
                pos[{ks[q].n, ks[q].g, basis[b]}] += kp;
            }
        }
    }

    // rest sums to full sums: p'_j = p_j - y_1^j
    std::map<int, DiffOperator> ops;
    for (auto& [key, c] : pos) {
        auto& [n, g, bb] = key;
        int L = static_cast<int>(bb.size());
        for (int mask = 0; mask < (1 << L); ++mask) {
            int m = n;
            int sgn = 1;
            std::vector<int> keep;
            for (int i = 0; i < L; ++i) {
                if (mask >> i & 1) {
                    m += bb[i];
                    sgn = -sgn;
                } else
                    keep.push_back(bb[i]);
            }
            if (m > maxm) continue;
            std::vector<HalfIndex> ds;
            for (int a : g) ds.push_back(HalfIndex::of_power(a));
            // overall sign flip puts the leading term at -m d/dp_m
            ops[m].add(c * Rational(-sgn), Monomial::from_powers(keep), ds);
        }
    }
    std::vector<ConstraintEq> out;
    for (int m : orders) out.push_back({ops[m], m, P, dmax});
    return out;
}

ConstraintEq derive_constraint(int m, int P, const DeriveOptions& opt) { return derive_tower({m}, P, opt)[0]; }

StabilityReport compare_constraints(const ConstraintEq& a, const ConstraintEq& b) {
    StabilityReport r;
    int w = std::min(a.max_w2, b.max_w2) - a.half_order;
    DiffOperator x = a.op.truncated(w), y = b.op.truncated(w);
    DiffOperator diff = x;
    diff += y.scaled(KPoly(-1));
    for (auto& t : diff.terms()) {
        r.stable = false;
        std::string s = t.mult.str();
        for (auto d : t.derivs) s += "·∂" + Monomial::var(d).str();
        r.differences.push_back(s + " differs by " + t.coeff.str());
    }
    return r;
}

TSeries residual(const ConstraintEq& eq, const TSeries& F) {
    int w = std::min(eq.validity_w2(), F.w2() - eq.half_order);
    return apply(eq.op, exp_series(F), std::max(w, 0));
}

TSeries solve_F(int w2, const std::vector<ConstraintEq>& tower) {
    std::map<int, const ConstraintEq*> by_m;
    for (auto& e : tower) by_m[e.half_order] = &e;
    TSeries g = TSeries::one(w2);
    for (int d = 1; d <= w2; ++d) {
        // d/dp_m of the degree-d part from each equation: -m d_m g_d + r_m = 0
        std::map<int, TSeries> dg;
        for (auto& [m, e] : by_m) {
            if (m > d) continue;
            if (e->validity_w2() < d - m) continue;
            KPoly lead = e->op.coeff(Monomial(), {HalfIndex::of_power(m)});
            if (lead != KPoly(Rational(-m))) throw std::logic_error("constraint without leading term");
            DiffOperator rest = e->op;
            rest.add(-lead, Monomial(), {HalfIndex::of_power(m)});
            TSeries r = apply(rest, g, d - m).homogeneous(d - m);
            dg.emplace(m, r.scaled(KPoly(rat(1, m))));
        }
        // enumerate monomials of weight d in p-powers
        std::vector<std::vector<int>> parts;
        std::vector<int> cur;
        std::function<void(int, int)> gen = [&](int maxp, int left) {
            if (left == 0) {
                parts.push_back(cur);
                return;
            }
            for (int j = std::min(maxp, left); j >= 1; --j) {
                cur.push_back(j);
                gen(j, left - j);
                cur.pop_back();
            }
        };
        gen(d, d);
        TSeries gd(w2);
        std::vector<Monomial> undetermined;
        for (auto& pt : parts) {
            // smallest variable with an available equation
            std::vector<int> vars = pt;
            std::sort(vars.begin(), vars.end());
            vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
            bool done = false;
            for (int v : vars) {
                auto it = dg.find(v);
                if (it == dg.end()) continue;
                std::vector<int> lower = pt;
                lower.erase(std::find(lower.begin(), lower.end(), v));
                KPoly c = it->second.coeff(Monomial::from_powers(lower));
                int mult = static_cast<int>(std::count(pt.begin(), pt.end(), v));
                gd.add_term(Monomial::from_powers(pt), c * rat(1, mult));
                done = true;
                break;
            }
            if (!done) undetermined.push_back(Monomial::from_powers(pt));
        }
        if (!undetermined.empty()) {
            std::string s;
            for (auto& m : undetermined) s += " " + m.str();
            SolveError err(SolveError::Undetermined, "undetermined monomials at weight " + half_str(d) + ":" + s);
            err.undetermined = undetermined;
            throw err;
        }
        // every supplied equation must hold for the chosen g_d
        for (auto& [m, r] : dg) {
            TSeries lhs = d_dt(gd, HalfIndex::of_power(m)).truncated(d - m).homogeneous(d - m);
            if (!(lhs - r.truncated(d - m)).is_zero()) {
                int used = 0;
                for (auto& [mm, rr] : dg)
                    if (mm < m) {
                        used = mm;
                        break;
                    }
                throw SolveError(SolveError::Conflict, "equations m=" + std::to_string(used ? used : m) + " and m=" +
                                                           std::to_string(m) + " disagree at weight " + half_str(d));
            }
        }
        g += gd;
    }
    return log_series(g);
}

}  // namespace kp

namespace kp {

TSeries free_energy(int w2, int P, const DeriveOptions& opt) {
    if (w2 < 0) throw UsageError("negative weight");
    if (w2 == 0) return TSeries(0);
    DeriveOptions o = opt;
    o.max_w2 = w2;
    std::vector<int> orders;
    for (int m = 1; m <= w2; ++m) orders.push_back(m);
    return solve_F(w2, derive_tower(orders, P, o));
}

}  // namespace kp
