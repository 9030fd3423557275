#include "kp/eigencalc.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace kp {

EigOperator EigOperator::identity(int P) {
    EigOperator r(P);
    r.add(1, {}, {});
    return r;
}

EigOperator EigOperator::d(int P, int c) {
    EigOperator r(P);
    r.add(1, {}, {c});
    return r;
}

void EigOperator::add_key(const Key& k, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = t_.try_emplace(k, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) t_.erase(it);
    }
}

void EigOperator::add(const Rational& c, const std::vector<std::pair<int, int>>& inv_diffs, std::vector<int> derivs) {
    Rational co = c;
    std::map<std::pair<int, int>, int> pw;
    for (auto [a, b] : inv_diffs) {
        if (a == b) throw DomainErrorEig("factor 1/(lambda_a - lambda_a)");
        if (a < 0 || b < 0 || a >= P_ || b >= P_) throw std::out_of_range("eigenvalue index");
        if (a > b) {
            std::swap(a, b);
            co = -co;
        }
        ++pw[{a, b}];
    }
    std::vector<EigFactor> f;
    for (auto& [ij, n] : pw) f.push_back({ij.first, ij.second, n});
    std::sort(derivs.begin(), derivs.end());
    add_key({f, derivs}, co);
}

std::vector<EigTerm> EigOperator::terms() const {
    std::vector<EigTerm> r;
    for (auto& [k, c] : t_) r.push_back({c, k.first, k.second});
    return r;
}

EigOperator& EigOperator::operator+=(const EigOperator& o) {
    for (auto& [k, c] : o.t_) add_key(k, c);
    return *this;
}

EigOperator& EigOperator::operator-=(const EigOperator& o) {
    for (auto& [k, c] : o.t_) add_key(k, -c);
    return *this;
}

EigOperator EigOperator::scaled(const Rational& s) const {
    EigOperator r(P_);
    for (auto& [k, c] : t_) r.add_key(k, c * s);
    return r;
}

EigOperator EigOperator::compose_d(int c) const {
    EigOperator r(P_);
    for (auto& [k, co] : t_) {
        auto dv = k.second;
        dv.push_back(c);
        std::sort(dv.begin(), dv.end());
        r.add_key({k.first, dv}, co);
        for (size_t n = 0; n < k.first.size(); ++n) {
            const auto& f = k.first[n];
            if (f.i != c && f.j != c) continue;
            auto fs = k.first;
            fs[n].power += 1;
            Rational s = f.power;
            r.add_key({fs, k.second}, f.i == c ? Rational(-co * s) : Rational(co * s));
        }
    }
    return r;
}

EigOperator EigOperator::times_inv_diff(int a, int b) const {
    EigOperator r(P_);
    for (auto& [k, co] : t_) {
        std::vector<std::pair<int, int>> pairs;
        for (auto& f : k.first)
            for (int n = 0; n < f.power; ++n) pairs.push_back({f.i, f.j});
        pairs.push_back({a, b});
        r.add(co, pairs, k.second);
    }
    return r;
}

namespace {

std::vector<EigFactor> bump(std::vector<EigFactor> fs, int i, int j, int delta) {
    for (auto it = fs.begin(); it != fs.end(); ++it)
        if (it->i == i && it->j == j) {
            it->power += delta;
            if (it->power == 0) fs.erase(it);
            return fs;
        }
    fs.push_back({i, j, delta});
    std::sort(fs.begin(), fs.end());
    return fs;
}

}  // namespace

EigOperator EigOperator::canonical() const {
    EigOperator r(P_);
    std::deque<std::pair<Key, Rational>> work(t_.begin(), t_.end());
    while (!work.empty()) {
        auto [k, co] = work.front();
        work.pop_front();
        bool split = false;
        for (size_t x = 0; x < k.first.size() && !split; ++x)
            for (size_t y = 0; y < k.first.size() && !split; ++y) {
                const auto& a = k.first[x];
                const auto& b = k.first[y];
                // x_ik x_jk with i < j < k
                if (a.j != b.j || !(a.i < b.i)) continue;
                int i = a.i, j = b.i, kk = a.j;
                // x_ik x_jk = x_ij x_jk - x_ij x_ik
                auto t1 = bump(bump(k.first, i, kk, -1), i, j, +1);
                auto t2 = bump(bump(k.first, j, kk, -1), i, j, +1);
                work.push_back({{t1, k.second}, co});
                work.push_back({{t2, k.second}, -co});
                split = true;
            }
        if (!split) r.add_key(k, co);
    }
    return r;
}

std::string EigOperator::str() const {
    std::ostringstream os;
    bool first = true;
    for (auto& [k, c] : t_) {
        os << (first ? "" : " + ") << "(" << to_string(c) << ")";
        first = false;
        for (auto& f : k.first) {
            os << "/(l" << f.i << "-l" << f.j << ")";
            if (f.power > 1) os << "^" << f.power;
        }
        for (int d : k.second) os << " d" << d;
    }
    return first ? "0" : os.str();
}

std::map<std::vector<int>, double> EigOperator::coefficients_at(const std::vector<double>& lam) const {
    if (static_cast<int>(lam.size()) != P_) throw std::invalid_argument("eigenvalue count mismatch");
    std::map<std::vector<int>, double> r;
    for (auto& [k, c] : t_) {
        double v = c.get_d();
        for (auto& f : k.first) {
            double diff = lam[f.i] - lam[f.j];
            if (diff == 0) throw DomainErrorEig("coincident eigenvalues");
            v *= std::pow(diff, -f.power);
        }
        r[k.second] += v;
    }
    return r;
}

namespace {

std::vector<EigOperator> recurse(int p, int P, bool reverse, bool canon_each) {
    if (p < 1) throw std::invalid_argument("p must be >= 1");
    if (P < 2) throw std::invalid_argument("P must be >= 2");
    std::vector<EigOperator> g;
    for (int c = 0; c < P; ++c) g.push_back(EigOperator::d(P, c));
    for (int level = 1; level < p; ++level) {
        std::vector<EigOperator> next;
        for (int c = 0; c < P; ++c) {
            EigOperator acc = g[c].compose_d(c);
            for (int n = 0; n < P; ++n) {
                int d = reverse ? P - 1 - n : n;
                if (d == c) continue;
                EigOperator diff = g[c];
                diff -= g[d];
                acc += diff.times_inv_diff(c, d);
            }
            next.push_back(canon_each ? acc.canonical() : acc);
        }
        g = std::move(next);
    }
    for (auto& op : g) op = op.canonical();
    return g;
}

}  // namespace

std::vector<EigOperator> gamma_all(int p, int P) { return recurse(p, P, false, true); }

EigOperator gamma(int p, int P, int c) { return gamma_all(p, P).at(c); }

EigOperator gamma_alt_order(int p, int P, int c) { return recurse(p, P, true, false).at(c); }

EigOperator gamma3_display(int P, int c, bool include_d_eq_c) {
    EigOperator r(P);
    r.add(1, {}, {c, c, c});
    for (int d = 0; d < P; ++d) {
        if (d == c) continue;
        // (d_c - d_d)(2 d_c + d_d) = 2 d_c^2 - d_c d_d - d_d^2
        r.add(2, {{c, d}}, {c, c});
        r.add(-1, {{c, d}}, {c, d});
        r.add(-1, {{c, d}}, {d, d});
        r.add(-1, {{c, d}, {c, d}}, {c});
        r.add(1, {{c, d}, {c, d}}, {d});
    }
    for (int e = 0; e < P; ++e) {
        if (e == c) continue;
        for (int d = 0; d < P; ++d) {
            if (d == e || (d == c && !include_d_eq_c)) continue;
            r.add(2, {{c, e}, {e, d}}, {c});
            r.add(-2, {{c, e}, {e, d}}, {e});
        }
    }
    return r.canonical();
}

PartialFn trace_function(std::function<double(int, double)> g) {
    return [g](const std::vector<int>& dv, const std::vector<double>& lam) {
        if (dv.empty()) {
            double s = 0;
            for (double x : lam) s += g(0, x);
            return s;
        }
        for (int d : dv)
            if (d != dv.front()) return 0.0;
        return g(static_cast<int>(dv.size()), lam.at(dv.front()));
    };
}

double apply_eig(const EigOperator& op, const PartialFn& f, const std::vector<double>& lambdas) {
    for (size_t i = 0; i < lambdas.size(); ++i)
        for (size_t j = i + 1; j < lambdas.size(); ++j)
            if (lambdas[i] == lambdas[j]) throw DomainErrorEig("coincident eigenvalues");
    double s = 0;
    for (auto& [dv, c] : op.coefficients_at(lambdas)) s += c * f(dv, lambdas);
    return s;
}

namespace {

// mixed central difference along directions E_{r_t s_t}, t = 0..p-1
std::complex<double> mixed_central(const MatrixFn& F, const CMatrix& L, const std::vector<std::pair<int, int>>& dirs,
                                   double h) {
    const int p = static_cast<int>(dirs.size());
    std::complex<double> acc = 0;
    for (int mask = 0; mask < (1 << p); ++mask) {
        CMatrix X = L;
        int sign = 1;
        for (int t = 0; t < p; ++t) {
            double s = (mask >> t & 1) ? -1.0 : 1.0;
            if (s < 0) sign = -sign;
            X(dirs[t].first, dirs[t].second) += s * h;
        }
        acc += static_cast<double>(sign) * F(X);
    }
    return acc / (std::pow(2.0 * h, p));
}

std::complex<double> chained(const MatrixFn& F, const CMatrix& L, int p, int a, int b, double h) {
    const int n = static_cast<int>(L.rows());
    std::complex<double> total = 0;
    // (D^p)_{ab} = sum over d_1..d_{p-1} of D_{a d1} D_{d1 d2} ... D_{d_{p-1} b}
    std::vector<int> idx(std::max(0, p - 1), 0);
    while (true) {
        std::vector<std::pair<int, int>> dirs;
        int prev = a;
        for (int t = 0; t < p - 1; ++t) {
            dirs.push_back({prev, idx[t]});
            prev = idx[t];
        }
        dirs.push_back({prev, b});
        total += mixed_central(F, L, dirs, h);
        int t = 0;
        for (; t < p - 1; ++t) {
            if (++idx[t] < n) break;
            idx[t] = 0;
        }
        if (t == p - 1) break;
    }
    return total;
}

}  // namespace

FdResult matrix_derivative_fd(const MatrixFn& F, const CMatrix& Lambda, int p, int a, int b, double gap_floor) {
    if (p < 1 || p > 3) throw std::invalid_argument("finite differences support p = 1..3");
    if (Lambda.rows() != Lambda.cols()) throw std::invalid_argument("square matrix required");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(Lambda);
    auto ev = es.eigenvalues();
    FdResult r;
    r.min_gap = std::numeric_limits<double>::infinity();
    for (int i = 1; i < ev.size(); ++i) r.min_gap = std::min(r.min_gap, ev[i] - ev[i - 1]);
    r.ill_conditioned = r.min_gap < gap_floor;
    // rounding ~ eps/h^p against h^4 after one Richardson level
    const double h = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (p + 4)) * (1 + Lambda.norm());
    auto coarse = chained(F, Lambda, p, a, b, h);
    auto fine = chained(F, Lambda, p, a, b, h / 2);
    r.value = (4.0 * fine - coarse) / 3.0;
    return r;
}

std::complex<double> spectral_derivative(const std::vector<EigOperator>& gam, const PartialFn& f,
                                         const CMatrix& Lambda, int a, int b) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(Lambda);
    const auto& U = es.eigenvectors();
    std::vector<double> lam(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    if (gam.size() != lam.size()) throw std::invalid_argument("operator family size mismatch");
    std::complex<double> s = 0;
    for (size_t c = 0; c < lam.size(); ++c)
        s += U(b, c) * apply_eig(gam[c], f, lam) * std::conj(U(a, c));
    return s;
}

}  // namespace kp
