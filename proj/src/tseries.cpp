#include "kp/tseries.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace kp {

std::string HalfIndex::str() const { return half_str(twice); }

int parse_half(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            size_t pos = 0;
            int v = std::stoi(s, &pos);
            if (pos != s.size() || v < 0) throw UsageError("");
            return 2 * v;
        }
        size_t p1 = 0, p2 = 0;
        std::string a = s.substr(0, slash), b = s.substr(slash + 1);
        int num = std::stoi(a, &p1), den = std::stoi(b, &p2);
        if (p1 != a.size() || p2 != b.size() || num < 0) throw UsageError("");
        if (den == 1) return 2 * num;
        if (den == 2) return num;
    } catch (const std::exception&) {
    }
    throw UsageError("not a non-negative half-integer: " + s);
}

std::string half_str(int twice) {
    if (twice % 2 == 0) return std::to_string(twice / 2);
    return std::to_string(twice) + "/2";
}

Monomial::Monomial(std::vector<std::pair<int, int>> e) : e_(std::move(e)) {
    std::sort(e_.begin(), e_.end());
    std::vector<std::pair<int, int>> m;
    for (auto& [n, x] : e_) {
        if (n < 0) throw std::invalid_argument("negative index in monomial");
        if (!m.empty() && m.back().first == n)
            m.back().second += x;
        else
            m.push_back({n, x});
    }
    std::erase_if(m, [](auto& p) { return p.second == 0; });
    e_ = std::move(m);
}

Monomial Monomial::var(HalfIndex n, int e) { return Monomial({{n.twice, e}}); }

Monomial Monomial::from_powers(const std::vector<int>& js) {
    std::vector<std::pair<int, int>> v;
    for (int j : js) v.push_back({j - 1, 1});
    return Monomial(std::move(v));
}

int Monomial::weight2() const {
    int w = 0;
    for (auto& [n, e] : e_) w += (n + 1) * e;
    return w;
}

int Monomial::degree() const {
    int d = 0;
    for (auto& p : e_) d += p.second;
    return d;
}

int Monomial::exponent(HalfIndex n) const {
    for (auto& [m, e] : e_)
        if (m == n.twice) return e;
    return 0;
}

std::vector<int> Monomial::powers() const {
    std::vector<int> r;
    for (auto& [n, e] : e_)
        for (int i = 0; i < e; ++i) r.push_back(n + 1);
    return r;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
    std::vector<std::pair<int, int>> r;
    size_t i = 0, j = 0;
    while (i < a.e_.size() || j < b.e_.size()) {
        if (j == b.e_.size() || (i < a.e_.size() && a.e_[i].first < b.e_[j].first))
            r.push_back(a.e_[i++]);
        else if (i == a.e_.size() || b.e_[j].first < a.e_[i].first)
            r.push_back(b.e_[j++]);
        else {
            r.push_back({a.e_[i].first, a.e_[i].second + b.e_[j].second});
            ++i, ++j;
        }
    }
    Monomial m;
    m.e_ = std::move(r);
    return m;
}

std::string Monomial::str() const {
    if (e_.empty()) return "1";
    std::string s;
    for (auto& [n, e] : e_) {
        if (!s.empty()) s += "·";
        s += n % 2 == 0 ? "t" + std::to_string(n / 2) : "t_{" + half_str(n) + "}";
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
}

TSeries TSeries::one(int w2) {
    TSeries r(w2);
    r.add_term(Monomial(), KPoly(1));
    return r;
}

KPoly TSeries::coeff(const Monomial& m) const {
    auto it = t_.find(m);
    return it == t_.end() ? KPoly() : it->second;
}

void TSeries::add_term(const Monomial& m, const KPoly& c) {
    if (m.weight2() > w2_ || c.is_zero()) return;
    auto [it, fresh] = t_.try_emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) t_.erase(it);
    }
}

TSeries& TSeries::operator+=(const TSeries& o) {
    if (o.w2_ != w2_) throw UsageError("truncation weight mismatch");
    for (auto& [m, c] : o.t_) add_term(m, c);
    return *this;
}

TSeries& TSeries::operator-=(const TSeries& o) {
    if (o.w2_ != w2_) throw UsageError("truncation weight mismatch");
    for (auto& [m, c] : o.t_) add_term(m, -c);
    return *this;
}

TSeries operator*(const TSeries& a, const TSeries& b) {
    if (a.w2_ != b.w2_) throw UsageError("truncation weight mismatch");
    TSeries r(a.w2_);
    for (auto& [ma, ca] : a.t_) {
        int wa = ma.weight2();
        for (auto& [mb, cb] : b.t_) {
            if (wa + mb.weight2() > a.w2_) continue;
            r.add_term(ma * mb, ca * cb);
        }
    }
    return r;
}

TSeries mul(const TSeries& a, const TSeries& b) { return a * b; }

TSeries TSeries::scaled(const KPoly& s) const {
    TSeries r(w2_);
    for (auto& [m, c] : t_) r.add_term(m, c * s);
    return r;
}

TSeries TSeries::truncated(int w2) const {
    TSeries r(w2);
    for (auto& [m, c] : t_) r.add_term(m, c);
    return r;
}

TSeries TSeries::homogeneous(int w2) const {
    TSeries r(w2_);
    for (auto& [m, c] : t_)
        if (m.weight2() == w2) r.add_term(m, c);
    return r;
}

TSeries TSeries::flip_k() const {
    TSeries r(w2_);
    for (auto& [m, c] : t_) r.add_term(m, c.flip_k());
    return r;
}

TSeries TSeries::at_k(const Rational& k) const {
    TSeries r(w2_);
    for (auto& [m, c] : t_) r.add_term(m, KPoly(c.eval(k)));
    return r;
}

TSeries exp_series(const TSeries& a) {
    if (!a.coeff(Monomial()).is_zero()) throw UsageError("exp_series: nonzero constant term");
    TSeries r = TSeries::one(a.w2());
    TSeries p = TSeries::one(a.w2());
    for (int m = 1; m <= a.w2() + 1; ++m) {
        p = (p * a).scaled(KPoly(rat(1, m)));
        if (p.is_zero()) break;
        r += p;
    }
    return r;
}

TSeries log_series(const TSeries& a) {
    if (a.coeff(Monomial()) != KPoly(1)) throw UsageError("log_series: constant term must be 1");
    TSeries u = a - TSeries::one(a.w2());
    TSeries r(a.w2());
    TSeries p = TSeries::one(a.w2());
    for (int m = 1; m <= a.w2() + 1; ++m) {
        p = p * u;
        if (p.is_zero()) break;
        r += p.scaled(KPoly(rat(m % 2 ? 1 : -1, m)));
    }
    return r;
}

TSeries d_dt(const TSeries& a, HalfIndex n) {
    TSeries r(a.w2() - n.power());
    for (auto& [m, c] : a.terms()) {
        int e = m.exponent(n);
        if (e == 0) continue;
        std::vector<std::pair<int, int>> v = m.items();
        for (auto& p : v)
            if (p.first == n.twice) p.second -= 1;
        r.add_term(Monomial(v), c * Rational(e));
    }
    return r;
}

double eval_at_spectrum(const TSeries& a, const SpectrumSample& s, double k) {
    if (s.lambdas.empty()) throw UsageError("empty spectrum");
    for (double l : s.lambdas)
        if (!(l > 0)) throw UsageError("eigenvalues must be positive");
    double total = 0;
    for (auto& [m, c] : a.terms()) {
        double v = c.eval(k);
        for (auto& [n, e] : m.items()) {
            double t = 0;
            for (double l : s.lambdas) t += std::pow(l, -0.5 * (n + 1));
            v *= std::pow(t, e);
        }
        total += v;
    }
    return total;
}

std::string TSeries::to_json() const {
    nlohmann::json j;
    j["truncation_weight"] = half_str(w2_);
    j["terms"] = nlohmann::json::array();
    // weight first, then lexicographic
    std::vector<std::pair<Monomial, KPoly>> v(t_.begin(), t_.end());
    std::stable_sort(v.begin(), v.end(),
                     [](auto& a, auto& b) { return a.first.weight2() < b.first.weight2(); });
    for (auto& [m, c] : v) {
        nlohmann::json mono = nlohmann::json::array();
        for (auto& [n, e] : m.items()) mono.push_back({n, e});
        j["terms"].push_back({{"monomial", mono}, {"coeff", c.to_strings()}});
    }
    return j.dump();
}

TSeries TSeries::from_json(const std::string& s) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(s);
        TSeries r(parse_half(j.at("truncation_weight").get<std::string>()));
        for (auto& t : j.at("terms")) {
            std::vector<std::pair<int, int>> v;
            for (auto& p : t.at("monomial")) v.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
            r.add_term(Monomial(v), KPoly::from_strings(t.at("coeff").get<std::vector<std::string>>()));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("bad series json: ") + e.what());
    }
}

}  // namespace kp
