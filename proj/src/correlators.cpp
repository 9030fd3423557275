#include "kp/correlators.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace kp {

int LaurentPoly::s_degree(const Exps& e) const {
    int d = 0;
    for (int j = 0; j < ns_; ++j) d += e[nu_ + j];
    return d;
}

LaurentPoly LaurentPoly::constant(int nu, int ns, int smax, const Rational& c) {
    LaurentPoly r(nu, ns, smax);
    r.add_term(Exps(nu + ns, 0), c);
    return r;
}

LaurentPoly LaurentPoly::contour_var(int nu, int ns, int smax, int i, int power) {
    LaurentPoly r(nu, ns, smax);
    Exps e(nu + ns, 0);
    e[i] = power;
    r.add_term(e, 1);
    return r;
}

LaurentPoly LaurentPoly::s_var(int nu, int ns, int smax, int j, int power) {
    LaurentPoly r(nu, ns, smax);
    Exps e(nu + ns, 0);
    e[nu + j] = power;
    r.add_term(e, 1);
    return r;
}

Rational LaurentPoly::coeff(const Exps& e) const {
    auto it = t_.find(e);
    return it == t_.end() ? Rational(0) : it->second;
}

void LaurentPoly::add_term(const Exps& e, const Rational& c) {
    if (c == 0) return;
    if (smax_ >= 0 && s_degree(e) > smax_) return;
    auto [it, fresh] = t_.emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) t_.erase(it);
    }
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    for (auto& [e, c] : o.t_) add_term(e, c);
    return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    int cap = a.smax_ < 0 ? b.smax_ : (b.smax_ < 0 ? a.smax_ : std::min(a.smax_, b.smax_));
    LaurentPoly r(a.nu_, a.ns_, cap);
    LaurentPoly::Exps e(a.nu_ + a.ns_);
    for (auto& [ea, ca] : a.t_)
        for (auto& [eb, cb] : b.t_) {
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

LaurentPoly LaurentPoly::scaled(const Rational& c) const {
    LaurentPoly r(nu_, ns_, smax_);
    for (auto& [e, v] : t_) r.add_term(e, v * c);
    return r;
}

LaurentPoly LaurentPoly::exp() const {
    if (smax_ < 0) throw std::logic_error("exp needs an s-degree cap");
    for (auto& [e, c] : t_)
        if (s_degree(e) < 1) throw std::logic_error("exp argument needs positive s-degree");
    LaurentPoly r = constant(nu_, ns_, smax_, 1), p = r;
    for (int n = 1; n <= smax_; ++n) {
        p = (p * *this).scaled(Rational(1) / n);
        if (p.t_.empty()) break;
        r += p;
    }
    return r;
}

LaurentPoly LaurentPoly::pow(int n) const {
    LaurentPoly r = constant(nu_, ns_, smax_, 1);
    for (int i = 0; i < n; ++i) r = r * *this;
    return r;
}

LaurentPoly LaurentPoly::contour_floor(int i, int floor) const {
    LaurentPoly r(nu_, ns_, smax_);
    for (auto& [e, c] : t_)
        if (e[i] >= floor) r.add_term(e, c);
    return r;
}

LaurentPoly residue(const LaurentPoly& f, int var) {
    LaurentPoly r(f.nu(), f.ns(), f.smax());
    for (auto& [e, c] : f.terms())
        if (e[var] == -1) {
            auto e2 = e;
            e2[var] = 0;
            r.add_term(e2, c);
        }
    return r;
}

namespace {

Rational binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return Rational(r);
}

// (1 + s_j / u_i)^k for integer k >= 0
LaurentPoly ratio_power(int nu, int ns, int smax, int i, int j, int k) {
    LaurentPoly r(nu, ns, smax);
    for (int a = 0; a <= k; ++a) {
        LaurentPoly::Exps e(nu + ns, 0);
        e[i] = -a;
        e[nu + j] = a;
        r.add_term(e, binom(k, a));
    }
    return r;
}

// interpolate per-coefficient values sampled at k = 0..n-1, checking the last sample
template <class Key>
std::map<Key, KPoly> interpolate_k(const std::vector<std::map<Key, Rational>>& samples, int degree) {
    std::set<Key> keys;
    for (auto& s : samples)
        for (auto& [kk, v] : s) keys.insert(kk);
    std::map<Key, KPoly> out;
    int n = static_cast<int>(samples.size());
    if (n < degree + 2) throw std::logic_error("not enough k samples for verification");
    for (auto& key : keys) {
        std::vector<Rational> xs, ys;
        for (int i = 0; i <= degree; ++i) {
            xs.push_back(i);
            auto it = samples[i].find(key);
            ys.push_back(it == samples[i].end() ? Rational(0) : it->second);
        }
        KPoly p = interpolate(xs, ys);
        for (int i = degree + 1; i < n; ++i) {
            auto it = samples[i].find(key);
            Rational y = it == samples[i].end() ? Rational(0) : it->second;
            if (p.eval(Rational(i)) != y)
                throw std::runtime_error("k interpolation failed verification at k=" + std::to_string(i));
        }
        if (!p.is_zero()) out[key] = p;
    }
    return out;
}

}  // namespace

KPoly gaussian_moment(int j) {
    if (j < 1) throw UsageError("gaussian_moment needs j >= 1");
    auto U = gaussian_U(2 * j);
    Rational f = 1;
    for (int i = 2; i <= 2 * j; ++i) f *= i;
    return U[2 * j] * f;
}

std::vector<KPoly> gaussian_U(int order) {
    // U(s) = (1/s) e^{s^2/2} Res_u (1+s/u)^k e^{su}
    int degree = order + 1;
    std::vector<std::map<int, Rational>> samples;
    for (int k = 0; k <= degree + 1; ++k) {
        int cap = order + 1;
        auto su = LaurentPoly::contour_var(1, 1, cap, 0) * LaurentPoly::s_var(1, 1, cap, 0);
        auto r = residue(su.exp() * ratio_power(1, 1, cap, 0, 0, k), 0);
        auto pre = LaurentPoly::s_var(1, 1, cap, 0, 2).scaled(Rational(1, 2)).exp();
        auto full = pre * r;
        std::map<int, Rational> m;
        for (auto& [e, c] : full.terms())
            if (e[1] - 1 <= order) m[e[1] - 1] += c;
        samples.push_back(m);
    }
    auto poly = interpolate_k(samples, degree);
    std::vector<KPoly> out(order + 1);
    for (auto& [p, c] : poly) {
        if (p < 0) throw std::logic_error("negative s power in U");
        out[p] = c;
    }
    return out;
}

GreenExpansion green_expansion(int order) {
    // lambda_hat^{-2j} = 2^{-j} lambda^{-3j/2} = 2^{-j} t_{(3j-1)/2}
    GreenExpansion g;
    g.log_coeff = KPoly::k();
    int w2 = 3 * order;
    g.t_part = TSeries(w2);
    for (int j = 1; 3 * j <= w2; ++j) {
        Rational f = Rational(1, 2 * j);
        for (int i = 0; i < j; ++i) f /= 2;
        g.t_part.add_term(Monomial::var({3 * j - 1}), gaussian_moment(j) * f);
    }
    return g;
}

std::vector<KPoly> kp_onepoint(int s_order) {
    // U(s) = e^{-s^3/3}/s Res_u e^{-s u^2 - s^2 u} (1 + s/u)^k
    int degree = s_order + 2;
    int cap = s_order + 1;
    auto u = LaurentPoly::contour_var(1, 1, cap, 0);
    auto s = LaurentPoly::s_var(1, 1, cap, 0);
    auto ex = ((s * u * u) + (s * s * u)).scaled(-1).exp();
    auto pre = (s * s * s).scaled(Rational(-1, 3)).exp();
    std::vector<std::map<int, Rational>> samples;
    for (int k = 0; k <= degree + 1; ++k) {
        auto full = pre * residue(ex * ratio_power(1, 1, cap, 0, 0, k), 0);
        std::map<int, Rational> m;
        for (auto& [e, c] : full.terms())
            if (e[1] - 1 <= s_order) m[e[1] - 1] += c;
        samples.push_back(m);
    }
    auto poly = interpolate_k(samples, degree);
    std::vector<KPoly> out(s_order + 1);
    for (auto& [p, c] : poly) out.at(p) = c;
    return out;
}

std::map<std::pair<int, int>, KPoly> kp_twopoint(int s_order) {
    // e^{-(s1^3+s2^3)/3} Res_{u1} Res_{u2} e^{-s1 u1^2 - s1^2 u1 - s2 u2^2 - s2^2 u2}
    //   / ((u1 - u2 + s1)(u2 - u1 + s2)) * (1 + s1/u1)^k (1 + s2/u2)^k
    // The u2 contour encloses 0, u1+s1 and u1-s2, so expand in 1/u2.
    const int nu = 2, ns = 2;
    int cap = s_order + 2;
    auto U1 = LaurentPoly::contour_var(nu, ns, cap, 0), U2 = LaurentPoly::contour_var(nu, ns, cap, 1);
    auto S1 = LaurentPoly::s_var(nu, ns, cap, 0), S2 = LaurentPoly::s_var(nu, ns, cap, 1);
    auto e1 = (U1 * U1 * S1 + S1 * S1 * U1).scaled(-1).exp();
    auto e2 = (U2 * U2 * S2 + U2 * S2 * S2).scaled(-1).exp();
    auto pre = (S1 * S1 * S1 + S2 * S2 * S2).scaled(Rational(-1, 3)).exp();
    int umax = 0;
    for (auto& [e, c] : e2.terms()) umax = std::max(umax, e[1]);
    auto geom = [&](const LaurentPoly& a) {
        // 1/(u2 - a) = sum_n a^n u2^{-n-1}
        LaurentPoly r(nu, ns, cap), p = LaurentPoly::constant(nu, ns, cap, 1);
        for (int n = 0; n <= umax + 1; ++n) {
            r += p * LaurentPoly::contour_var(nu, ns, cap, 1, -n - 1);
            p = p * a;
        }
        return r;
    };
    auto kern = (geom(U1 + S1) * geom(U1 + S2.scaled(-1))).scaled(-1);
    auto base = e2 * kern;
    int degree = s_order + 2;
    std::vector<std::map<std::pair<int, int>, Rational>> samples;
    for (int k = 0; k <= degree + 1; ++k) {
        auto r2 = residue(base * ratio_power(nu, ns, cap, 1, 1, k), 1);
        auto r1 = residue(r2 * e1 * ratio_power(nu, ns, cap, 0, 0, k), 0);
        auto full = pre * r1;
        std::map<std::pair<int, int>, Rational> m;
        for (auto& [e, c] : full.terms())
            if (e[2] + e[3] <= s_order) m[{e[2], e[3]}] += c;
        samples.push_back(m);
    }
    return interpolate_k(samples, degree);
}

Rational replica_sinh(const MomentWord& w) {
    int l = static_cast<int>(w.powers.size());
    if (l == 0) throw UsageError("empty moment word");
    int total = 0;
    for (int d : w.powers) {
        if (d < 1) throw UsageError("moment word powers must be positive");
        total += d;
    }
    if (total % 2) return 0;
    // (1/sigma^2) prod 2 sinh(s_j sigma / 2) = sigma^{l-2} prod s_j * prod sum_n (s_j sigma/2)^{2n}/(2n+1)!
    const int cap = total + 2;  // room for the s_1/sigma division when l = 1
    LaurentPoly sigma(0, l, cap);
    for (int j = 0; j < l; ++j) sigma += LaurentPoly::s_var(0, l, cap, j);
    LaurentPoly r = LaurentPoly::constant(0, l, cap, 1);
    for (int j = 0; j < l; ++j) {
        LaurentPoly x = LaurentPoly::s_var(0, l, cap, j) * sigma;
        LaurentPoly x2 = (x * x).scaled(Rational(1, 4));
        LaurentPoly sum = LaurentPoly::constant(0, l, cap, 1), p = sum;
        Rational f = 1;
        for (int n = 1; 2 * n <= total; ++n) {
            p = p * x2;
            f *= (2 * n) * (2 * n + 1);
            sum += p.scaled(1 / f);
        }
        r = r * LaurentPoly::s_var(0, l, cap, j) * sum;
    }
    if (l >= 2)
        r = r * sigma.pow(l - 2);
    else
        r = r * LaurentPoly::s_var(0, l, cap, 0, -1);  // s_1 / sigma = 1
    LaurentPoly::Exps e(w.powers.begin(), w.powers.end());
    Rational c = r.coeff(e);
    for (int d : w.powers)
        for (int i = 2; i <= d; ++i) c *= i;
    return c;
}

PPoly wick_multitrace(const MomentWord& w) {
    int n = 0;
    for (int d : w.powers) {
        if (d < 1) throw UsageError("moment word powers must be positive");
        n += d;
    }
    if (n > 16) {
        mpz_class count = 1;
        for (int i = n - 1; i > 1; i -= 2) count *= i;
        throw UsageError("wick_multitrace refuses total power " + std::to_string(n) + " (" + count.get_str() +
                         " pairings)");
    }
    if (n % 2) return {};
    // half-edge h sits in a trace cycle; gamma maps it to the next half-edge of its trace
    std::vector<int> gamma(n);
    int pos = 0;
    for (int d : w.powers) {
        for (int i = 0; i < d; ++i) gamma[pos + i] = pos + (i + 1) % d;
        pos += d;
    }
    std::vector<long> counts(n / 2 + 2, 0);
    std::vector<int> pair(n, -1);
    std::function<void()> rec = [&] {
        int a = 0;
        while (a < n && pair[a] >= 0) ++a;
        if (a == n) {
            // index loops are cycles of gamma after the pairing
            std::vector<char> seen(n, 0);
            int cyc = 0;
            for (int h = 0; h < n; ++h) {
                if (seen[h]) continue;
                ++cyc;
                for (int x = h; !seen[x]; x = gamma[pair[x]]) seen[x] = 1;
            }
            ++counts[cyc];
            return;
        }
        for (int b = a + 1; b < n; ++b) {
            if (pair[b] >= 0) continue;
            pair[a] = b;
            pair[b] = a;
            rec();
            pair[a] = pair[b] = -1;
        }
    };
    rec();
    std::vector<Rational> c(counts.size());
    for (size_t i = 0; i < counts.size(); ++i) c[i] = Rational(counts[i]);
    return KPoly(c);
}

SixTermResult six_term_check() {
    // each display: prefactor (with k-power) times the replica value of its word
    struct Display {
        const char* label;
        Rational pre;
        int kpow;
        std::vector<int> word;
    };
    const std::vector<Display> ds = {
        {"(i) (k/4) tr B^4", rat(1, 4), 1, {4}},
        {"(ii) (1/6) tr B^3 (k^3/3!) (tr B)^3", rat(1, 36), 3, {3, 1, 1, 1}},
        {"(iii) (k/2) tr B^2 (k^2/2!) (tr B)^2", rat(1, 4), 3, {2, 1, 1}},
        {"(iv) (1/6) tr B^3 (k/3) tr B^3", rat(1, 18), 1, {3, 3}},
        {"(v) (1/2)(1/6)^2 (tr B^3)^2 (k/2) tr B^2", rat(1, 144), 1, {3, 3, 2}},
        {"(vi) k tr B (1/3!)(1/6 tr B^3)^3", rat(1, 1296), 1, {1, 3, 3, 3}},
    };
    SixTermResult r;
    for (auto& d : ds) {
        Rational v = d.pre * replica_sinh({d.word});
        std::vector<Rational> c(d.kpow + 1);
        c[d.kpow] = v;
        KPoly term(c);
        r.labels.push_back(d.label);
        r.raw.push_back(term);
        r.raw_total += term;
    }
    // lambda -> 2^{-2/3} lambda in the rescaling sends lambda^{-3} to 4 lambda^{-3}
    r.rescale = rat(1, 4);
    r.total = r.raw_total * r.rescale;
    return r;
}

Rational Dictionary::point(int m) {
    Rational f = 1;
    for (int i = 2; i < m; ++i) f *= i;
    return m % 2 ? -f : f;
}

Rational Dictionary::global(int n) {
    Rational g = 1;
    for (int i = 0; i < n; ++i) g /= 2;
    return n % 2 ? g : -g;
}

TSeries s_to_t(const std::vector<KPoly>& one, const std::map<std::pair<int, int>, KPoly>& two, int w2) {
    // t_{m-1/2} has doubled index 2m-1 and doubled weight 2m
    TSeries out(w2);
    for (size_t m = 1; m < one.size(); ++m) {
        if (one[m].is_zero() || 2 * static_cast<int>(m) > w2) continue;
        out.add_term(Monomial::var({2 * static_cast<int>(m) - 1}),
                     one[m] * (Dictionary::global(1) * Dictionary::point(static_cast<int>(m))));
    }
    for (auto& [mm, c] : two) {
        auto [a, b] = mm;
        if (a < 1 || b < 1 || 2 * (a + b) > w2) continue;
        Monomial mono = Monomial::var({2 * a - 1}) * Monomial::var({2 * b - 1});
        out.add_term(mono, c * (Dictionary::global(2) * Dictionary::point(a) * Dictionary::point(b) * rat(1, 2)));
    }
    return out;
}

std::vector<CalibrationPoint> calibrate(const TSeries& F, const std::vector<KPoly>& one,
                                        const std::map<std::pair<int, int>, KPoly>& two, int w2) {
    std::vector<CalibrationPoint> out;
    auto ratio = [](const KPoly& f, const KPoly& c, bool& ok) {
        ok = !c.is_zero();
        if (!ok) return Rational(0);
        int d = c.degree();
        Rational r = f.coeff(d) / c.coeff(d);
        if (f != c * r) throw std::runtime_error("free-energy coefficient not proportional to correlator");
        return r;
    };
    for (int m = 1; 2 * m <= w2 && m < static_cast<int>(one.size()); ++m) {
        CalibrationPoint p{{m}, 0, false};
        KPoly f = F.coeff(Monomial::var({2 * m - 1}));
        p.ratio = ratio(f, one[m], p.defined);
        if (!p.defined && !f.is_zero()) throw std::runtime_error("correlator vanishes where F does not");
        out.push_back(p);
    }
    for (int a = 1; 2 * (a + 1) <= w2; ++a)
        for (int b = a; 2 * (a + b) <= w2; ++b) {
            auto get = [&](int x, int y) {
                auto it = two.find({x, y});
                return it == two.end() ? KPoly() : it->second;
            };
            KPoly c = a == b ? get(a, b) * rat(1, 2) : (get(a, b) + get(b, a)) * rat(1, 2);
            CalibrationPoint p{{a, b}, 0, false};
            KPoly f = F.coeff(Monomial::var({2 * a - 1}) * Monomial::var({2 * b - 1}));
            p.ratio = ratio(f, c, p.defined);
            if (!p.defined && !f.is_zero()) throw std::runtime_error("correlator vanishes where F does not");
            out.push_back(p);
        }
    return out;
}

}  // namespace kp
