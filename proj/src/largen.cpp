#include "kp/largen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

namespace kp {

namespace {

// binomial(a, n) for rational a
Rational binom(const Rational& a, int n) {
    Rational r = 1;
    for (int i = 0; i < n; ++i) r = r * (a - i) / (i + 1);
    return r;
}

TSeries t_var(int n, int w2) {
    TSeries r(w2);
    r.add_term(Monomial::var(HalfIndex{2 * n}), KPoly(Rational(1)));
    return r;
}

std::vector<TSeries> powers_of(const TSeries& c, int nmax) {
    std::vector<TSeries> p{TSeries::one(c.w2())};
    for (int n = 1; n <= nmax; ++n) p.push_back(p.back() * c);
    return p;
}

TSeries c_step(const TSeries& c, int w2) {
    TSeries r(w2);
    auto cp = powers_of(c, w2);
    const Rational mh = rat(-1, 2);
    for (int n = 0; 3 * n + 1 <= w2; ++n) {
        TSeries term = cp[n] * t_var(n, w2);
        r -= term.scaled(KPoly(binom(mh, n)));
    }
    return r;
}

}  // namespace

TSeries c_series(int w2) {
    const int wc = w2 + 1;
    TSeries c(wc);
    for (int it = 0; it <= wc + 2; ++it) {
        TSeries next = c_step(c, wc);
        if (next == c) return c;
        c = std::move(next);
    }
    throw std::logic_error("c iteration did not settle");
}

TSeries genus_zero_k0(const TSeries& F) {
    TSeries r(F.w2());
    for (auto& [m, c] : F.terms()) {
        Rational c0 = c.coeff(0);
        if (c0 == 0) continue;
        int n = 0, dsum = 0;
        bool integral = true;
        for (auto& [tw, e] : m.items()) {
            if (tw % 2) integral = false;
            n += e;
            dsum += e * tw / 2;
        }
        if (integral && dsum == n - 3) r.add_term(m, KPoly(c0));
    }
    return r;
}

bool specific_heat_check(int w2, const TSeries& F) {
    if (F.w2() < w2 + 3) throw UsageError("free energy not complete to the weight needed");
    TSeries u = d_dt(d_dt(genus_zero_k0(F), HalfIndex{0}), HalfIndex{0});
    TSeries lhs = u.truncated(w2 + 1).scaled(KPoly(Rational(-2)));
    return lhs == c_series(w2);
}

WExpansion assemble_W(int w2) {
    TSeries c = c_series(w2).truncated(w2);
    auto cp = powers_of(c, w2 + 3);
    TSeries R(w2);
    const Rational a32 = rat(3, 2), a12 = rat(1, 2), mh = rat(-1, 2);
    // W1 beyond the Z0 and c sum sqrt(lambda) pieces
    for (int n = 2; n <= w2 + 3; ++n) {
        if (3 * n - 3 > w2) break;
        R += (cp[n] * t_var(n - 2, w2)).scaled(KPoly(rat(2, 3) * binom(a32, n)));
    }
    // W2
    for (int n = 1; n + 1 <= w2 + 3; ++n)
        R -= (cp[n + 1] * t_var(n - 1, w2)).scaled(KPoly(binom(a12, n)));
    // W3: d/dc = -(1/4) (sum (lambda+c)^{-1/2})^2
    for (int a = 0; 2 * a + 1 <= w2; ++a)
        for (int b = 0; 2 * a + 2 * b + 2 <= w2; ++b) {
            int e = a + b + 1;
            if (e >= static_cast<int>(cp.size())) continue;
            Rational co = rat(-1, 4) * binom(mh, a) * binom(mh, b) / e;
            R += (cp[e] * t_var(a, w2) * t_var(b, w2)).scaled(KPoly(co));
        }
    // W4
    R -= cp[3].scaled(KPoly(rat(1, 12)));
    return {R, c};
}

double z0_part(const std::vector<double>& lambdas, double k) {
    double a = 0, b = 0, l = 0;
    for (double x : lambdas) {
        a += std::pow(x, 1.5);
        l += std::log(x);
        for (double y : lambdas) b += std::log(std::sqrt(x) + std::sqrt(y));
    }
    return 2.0 / 3.0 * a - 0.5 * b + 0.5 * k * l;
}

double rho_moment(const SpectrumSample& s, double c, double power) {
    double r = 0;
    for (double l : s.lambdas) r += std::pow(l + c, power);
    return r / static_cast<double>(s.lambdas.size());
}

double eval_normalized(const TSeries& a, const SpectrumSample& s) {
    double total = 0;
    for (auto& [m, c] : a.terms()) {
        double v = c.eval(0.0);
        for (auto& [n, e] : m.items()) v *= std::pow(rho_moment(s, 0, -0.5 * (n + 1)), e);
        total += v;
    }
    return total;
}

namespace {

void check_spectrum(const SpectrumSample& s) {
    if (s.lambdas.empty()) throw UsageError("empty spectrum");
    for (double l : s.lambdas)
        if (!(l > 0) || !std::isfinite(l)) throw UsageError("eigenvalues must be positive and finite");
}

double wval(double x, const std::vector<double>& lam, double wt, double c) {
    double lx = std::sqrt(x + c), acc = 0;
    for (double y : lam) {
        double ly = std::sqrt(y + c);
        acc += 1.0 / ((lx + ly) * ly);
    }
    return lx + 0.5 * wt * acc;
}

double wprime(double x, const std::vector<double>& lam, double wt, double c) {
    double lx = std::sqrt(x + c), acc = 0;
    for (double y : lam) {
        double ly = std::sqrt(y + c);
        acc += 1.0 / ((lx + ly) * (lx + ly) * ly);
    }
    return 0.5 / lx - 0.25 * wt * acc / lx;
}

}  // namespace

double numeric_w(double x, const SpectrumSample& s, double c) {
    check_spectrum(s);
    if (!(x + c > 0)) throw DomainError("x + c must be positive");
    return wval(x, s.lambdas, 1.0 / s.lambdas.size(), c);
}

double solve_c_at(const SpectrumSample& s, double x) {
    check_spectrum(s);
    const double lmin = *std::min_element(s.lambdas.begin(), s.lambdas.end());
    const double wt = 1.0 / s.lambdas.size();
    const double kr = s.k_ratio;
    const double floor_c = -std::min(lmin, x);
    auto g = [&](double c) { return c + rho_moment(s, c, -0.5) - kr / wval(x, s.lambdas, wt, c); };
    // k-free part is convex; its minimizer splits the two negative roots
    auto gp0 = [&](double c) { return 1.0 - 0.5 * rho_moment(s, c, -1.5); };
    double lo = floor_c * (1 - 1e-15), hi = 0;
    if (gp0(hi) < 0) {
        while (gp0(hi) < 0) hi = 2 * hi + 1;
    } else {
        // gp0 -> -inf at the floor
        double a = lo, b = hi;
        for (int i = 0; i < 200 && b - a > 1e-15 * (1 + std::abs(a)); ++i) {
            double m = 0.5 * (a + b);
            (gp0(m) < 0 ? a : b) = m;
        }
        hi = b;
    }
    double cstar = hi;
    if (!(g(cstar) < 0)) {
        double margin = lmin + cstar;
        std::ostringstream msg;
        msg << "no admissible root: saddle function stays positive (min " << g(cstar)
            << " at c = " << cstar << ", endpoint margin " << margin << ")";
        throw NoRootError(msg.str(), margin);
    }
    double top = std::max(0.0, cstar) + 1 + std::abs(kr);
    while (g(top) <= 0) top = 2 * top + 1;
    boost::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(g, cstar, top, boost::math::tools::eps_tolerance<double>(52), iters);
    double c = 0.5 * (r.first + r.second);
    // one Newton polish with a centered derivative
    double h = 1e-7 * (1 + std::abs(c));
    double d = (g(c + h) - g(c - h)) / (2 * h);
    if (d != 0) {
        double cn = c - g(c) / d;
        if (std::abs(g(cn)) < std::abs(g(c))) c = cn;
    }
    return c;
}

SaddleState numeric_c(const SpectrumSample& s) {
    check_spectrum(s);
    const double lmin = *std::min_element(s.lambdas.begin(), s.lambdas.end());
    const double lmax = *std::max_element(s.lambdas.begin(), s.lambdas.end());
    SaddleState st;
    st.x_ref = 2 * lmax;
    st.c = solve_c_at(s, st.x_ref);
    st.endpoint_margin = lmin + st.c;
    if (!(st.endpoint_margin > 0)) throw NoRootError("root violates the endpoint margin", st.endpoint_margin);
    st.residual = std::abs(st.c + rho_moment(s, st.c, -0.5) - s.k_ratio / numeric_w(st.x_ref, s, st.c));
    return st;
}

double cubic_residual_at(double x, const SpectrumSample& s, double c) {
    check_spectrum(s);
    const auto& lam = s.lambdas;
    const size_t P = lam.size();
    const double wt = 1.0 / P;
    for (double l : lam) {
        if (std::abs(x - l) < 1e-12 * (1 + std::abs(l))) throw DomainError("x coincides with an eigenvalue");
        if (!(l + c > 0)) throw DomainError("lambda + c must be positive");
    }
    if (!(x + c > 0)) throw DomainError("x + c must be positive");
    const double wx = wval(x, lam, wt, c);
    std::vector<double> wu(P), f(P), fp(P);
    for (size_t i = 0; i < P; ++i) {
        wu[i] = wval(lam[i], lam, wt, c);
        double d = x - lam[i];
        f[i] = (wx - wu[i]) / d;
        fp[i] = (-wprime(lam[i], lam, wt, c) * d + (wx - wu[i])) / (d * d);
    }
    double r = wx * wx * wx - x * wx - (1 + s.k_ratio);
    double dbl = 0;
    for (size_t i = 0; i < P; ++i)
        for (size_t j = 0; j < P; ++j) {
            // coincident points take the confluent limit of the symmetrized kernel
            if (lam[i] == lam[j])
                dbl += 0.5 * fp[i];
            else
                dbl += f[i] / (lam[i] - lam[j]);
        }
    r += 2 * wt * wt * dbl;
    for (size_t i = 0; i < P; ++i)
        r += wt / (x - lam[i]) * (2 * wx * wx - wx * wu[i] - wu[i] * wu[i]);
    return r;
}

double cubic_residual(double x, const SpectrumSample& s, const SaddleState& st) {
    double c = s.k_ratio == 0 ? st.c : solve_c_at(s, x);
    return cubic_residual_at(x, s, c);
}

SpectrumSample parse_spectrum(const std::string& text) {
    SpectrumSample s;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string v) {
        auto a = v.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        auto b = v.find_last_not_of(" \t\r");
        return v.substr(a, b - a + 1);
    };
    auto num = [&](const std::string& v) {
        size_t pos = 0;
        double d = 0;
        try {
            d = std::stod(v, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != v.size() || v.empty())
            throw UsageError("spectrum line " + std::to_string(lineno) + ": not a number: " + v);
        return d;
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto h = line.find('#');
        if (h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq != std::string::npos) {
            std::string key = trim(line.substr(0, eq));
            if (key != "k_ratio") throw UsageError("spectrum line " + std::to_string(lineno) + ": unknown key " + key);
            s.k_ratio = num(trim(line.substr(eq + 1)));
            continue;
        }
        s.lambdas.push_back(num(line));
    }
    check_spectrum(s);
    return s;
}

SpectrumSample read_spectrum(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read spectrum file: " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_spectrum(buf.str());
}

}  // namespace kp
