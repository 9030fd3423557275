#include "kp/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "json.hpp"
#include "kp/constraints.hpp"
#include "kp/correlators.hpp"
#include "kp/eigencalc.hpp"
#include "kp/largen.hpp"
#include "kp/oracles.hpp"
#include "kp/parallel.hpp"
#include "kp/reference.hpp"

namespace kp {

namespace {

struct Outcome {
    bool pass;
    std::string measured;
    std::string tolerance;
};

std::string num(double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%.6g", v);
    return b;
}

std::string sci(double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%.3e", v);
    return b;
}

KPoly kpoly(std::initializer_list<Rational> c) { return KPoly(std::vector<Rational>(c)); }

// free energy at weight 9/2 and the P = 5 tower behind it, built once
class Shared {
public:
    const std::vector<ConstraintEq>& tower() {
        std::call_once(once_, [&] {
            DeriveOptions o;
            o.max_w2 = 9;
            std::vector<int> orders;
            for (int m = 1; m <= 9; ++m) orders.push_back(m);
            tower_ = derive_tower(orders, 5, o);
            F_ = solve_F(9, tower_);
        });
        return tower_;
    }
    const TSeries& F() {
        tower();
        return F_;
    }

private:
    std::once_flag once_;
    std::vector<ConstraintEq> tower_;
    TSeries F_;
};

std::vector<Monomial> mismatches(const TSeries& a, const TSeries& b) {
    std::vector<Monomial> out;
    TSeries d = a - b;
    for (auto& [m, c] : d.terms()) out.push_back(m);
    return out;
}

TSeries fixture(const SuiteOptions& opt) {
    TSeries t = opt.strict ? reference_table() : corrected_table();
    // wrong t1 constant
    if (opt.inject_fault) t.add_term(Monomial::var({2}), KPoly(rat(1, 1000)));
    return t;
}

// printed correlator convention: n-point coefficient times (-1)^{n+1} (-1)^{sum m}
KPoly printed_sign(const KPoly& c, int n, int total_power) {
    return ((n + 1 + total_power) % 2) ? -c : c;
}

CMatrix random_hermitian(int n, std::mt19937& rng, double gap_floor) {
    std::normal_distribution<double> N(0, 1);
    for (;;) {
        CMatrix A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = {N(rng), N(rng)};
        CMatrix H = (A + A.adjoint()) * 0.5;
        Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
        auto ev = es.eigenvalues();
        double gap = 1e300;
        for (int i = 0; i + 1 < n; ++i) gap = std::min(gap, ev(i + 1) - ev(i));
        if (gap >= gap_floor) return H;
    }
}

struct Check {
    std::string name;
    int criterion;
    std::function<Outcome()> run;
};

std::vector<Check> build(const SuiteOptions& opt, Shared& sh) {
    std::vector<Check> cs;
    auto add = [&](std::string name, int crit, std::function<Outcome()> f) {
        cs.push_back({std::move(name), crit, std::move(f)});
    };

    // 1: free energy against the fixture, the P = 1 ODE and the correlator dictionary
    add("ft.cross_check.table", 1, [&opt, &sh] {
        TSeries T = table_convention(sh.F());
        TSeries fx = fixture(opt);
        auto mm = mismatches(T, fx);
        if (mm.empty()) return Outcome{true, "all " + std::to_string(fx.size()) + " entries equal", "exact"};
        std::string msg = std::to_string(mm.size()) + " differ:";
        bool confirmed = opt.strict;
        auto logged = logged_discrepancies();
        for (auto& m : mm) {
            msg += " " + m.str() + " derived " + T.coeff(m).str() + " fixture " + fx.coeff(m).str() + ";";
            auto it = std::find_if(logged.begin(), logged.end(), [&](auto& d) { return d.monomial == m; });
            // a printed entry may only be overruled when the correlator route reaches it too
            if (it == logged.end() || !it->correlator_reachable) confirmed = false;
        }
        if (opt.strict && !confirmed) msg += " not reachable by the correlator route";
        return Outcome{confirmed, msg, "exact"};
    });
    add("ft.ledger", 1, [&sh] {
        TSeries T = table_convention(sh.F());
        TSeries printed = reference_table();
        auto mm = mismatches(T, printed);
        auto logged = logged_discrepancies();
        bool ok = mm.size() == logged.size();
        for (auto& d : logged)
            ok = ok && printed.coeff(d.monomial) == d.printed && T.coeff(d.monomial) == d.derived;
        return Outcome{ok, std::to_string(mm.size()) + " printed entries differ, " + std::to_string(logged.size()) + " logged",
                       "exact"};
    });
    add("ft.p1_ode", 1, [&sh] {
        auto ode = p1_log_series(9);
        auto red = reduce_to_p1(sh.F());
        std::string bad;
        for (int n = 0; n <= 9; ++n)
            if (ode[n] != red[n]) bad += " y^" + std::to_string(n);
        auto pr = reduce_to_p1(table_convention(reference_table()));
        std::string printed = pr[9] == ode[9] ? "" : "; printed table fails at y^9";
        return Outcome{bad.empty(), (bad.empty() ? "equal through y^9" : "differ at" + bad) + printed, "exact"};
    });
    add("ft.correlator_route", 1, [&sh] {
        TSeries T = table_convention(sh.F());
        TSeries pred = s_to_t(kp_onepoint(9), kp_twopoint(9), 9);
        // every one- and two-point monomial in even power sums
        int count = 0;
        std::string bad;
        std::vector<Monomial> monos;
        for (int a = 1; 2 * a <= 9; ++a) {
            monos.push_back(Monomial::var({2 * a - 1}));
            for (int b = a; 2 * (a + b) <= 9; ++b) monos.push_back(Monomial::var({2 * a - 1}) * Monomial::var({2 * b - 1}));
        }
        for (auto& m : monos) {
            ++count;
            if (T.coeff(m) != pred.coeff(m)) bad += " " + m.str();
        }
        return Outcome{bad.empty(), bad.empty() ? std::to_string(count) + " monomials agree" : "differ:" + bad, "exact"};
    });

    // 2
    add("k0.reduction", 2, [&opt, &sh] {
        TSeries F0 = sh.F().at_k(0);
        TSeries P0 = fixture(opt).at_k(0);
        int half = 0;
        for (auto& [m, c] : F0.terms())
            for (auto& [n, e] : m.items())
                if (n % 2) ++half;
        bool eq = F0 == P0;
        return Outcome{eq && half == 0,
                       std::to_string(F0.size()) + " k-free terms, " + (eq ? "equal" : "differ") + ", " +
                           std::to_string(half) + " half-integer variables",
                       "exact"};
    });

    // 3
    add("moments.table", 3, [] {
        std::vector<KPoly> want = {kpoly({0, 0, 1}), kpoly({0, 1, 0, 2}), kpoly({0, 0, 10, 0, 5}),
                                   kpoly({0, 21, 0, 70, 0, 14})};
        std::string got;
        bool ok = true;
        for (int j = 1; j <= 4; ++j) {
            KPoly g = gaussian_moment(j);
            ok = ok && g == want[j - 1];
            got += (j > 1 ? "; " : "") + g.str();
        }
        return Outcome{ok, got, "exact"};
    });
    add("moments.wick_route", 3, [] {
        std::string bad;
        for (int j = 1; j <= 6; ++j)
            if (gaussian_moment(j) != wick_multitrace({{2 * j}})) bad += " j=" + std::to_string(j);
        return Outcome{bad.empty(), bad.empty() ? "equal for j=1..6" : "differ at" + bad, "exact"};
    });

    // 4
    auto replica = [](std::vector<int> w, Rational want) {
        return [w, want] {
            Rational r = replica_sinh({w});
            Rational lin = wick_multitrace({w}).coeff(1);
            return Outcome{r == want && lin == want, "replica " + r.get_str() + ", linear-in-P " + lin.get_str(),
                           "exact, " + want.get_str()};
        };
    };
    add("replica.word_33", 4, replica({3, 3}, 3));
    add("replica.word_332", 4, replica({3, 3, 2}, 18));

    // 5
    add("correlator.onepoint_s3", 5, [] {
        KPoly c = printed_sign(kp_onepoint(3)[3], 1, 3);
        KPoly want = kpoly({0, rat(1, 6), 0, rat(1, 6)});
        return Outcome{c == want, c.str(), "exact, " + want.str()};
    });
    add("correlator.twopoint", 5, [&opt] {
        auto two = kp_twopoint(6);
        std::string msg;
        bool ok = true;
        for (auto& [ab, want] : reference_twopoint(!opt.strict)) {
            KPoly got = printed_sign(two[ab], 2, ab.first + ab.second);
            bool e = got == want;
            ok = ok && e;
            msg += (msg.empty() ? "" : "; ") + std::string("(") + std::to_string(ab.first) + "," +
                   std::to_string(ab.second) + ") " + got.str() + (e ? "" : " vs " + want.str());
        }
        return Outcome{ok, msg, "exact"};
    });

    // 6
    add("six_term.total", 6, [] {
        auto r = six_term_check();
        KPoly want = kpoly({0, rat(1, 6), 0, rat(1, 6)});
        return Outcome{r.total == want, r.total.str(), "exact, " + want.str()};
    });
    add("six_term.displays", 6, [] {
        auto r = six_term_check();
        // (iv) printed with lambda^{-3/4}; corrected power logged
        std::vector<KPoly> want = {kpoly({0, rat(1, 4)}),    kpoly({0, 0, 0, rat(1, 6)}), kpoly({0, 0, 0, rat(1, 2)}),
                                   kpoly({0, rat(1, 6)}),    kpoly({0, rat(1, 8)}),       kpoly({0, rat(1, 8)})};
        std::string msg;
        bool ok = r.raw.size() == want.size();
        for (size_t i = 0; ok && i < want.size(); ++i) {
            ok = r.raw[i] == want[i];
            msg += (i ? "; " : "") + r.raw[i].str();
        }
        return Outcome{ok, msg, "exact"};
    });

    // 7
    add("largen.c_series", 7, [] {
        TSeries c = c_series(6);
        TSeries want(c.w2());
        want.add_term(Monomial::var({0}), KPoly(-1));
        want.add_term(Monomial::var({0}) * Monomial::var({2}), KPoly(rat(-1, 2)));
        want.add_term(Monomial::var({0}, 2) * Monomial::var({4}), KPoly(rat(-3, 8)));
        want.add_term(Monomial::var({2}, 2) * Monomial::var({0}), KPoly(rat(-1, 4)));
        return Outcome{c == want, std::to_string(c.size()) + " terms, " + (c == want ? "equal" : "differ"), "exact"};
    });
    add("largen.specific_heat", 7, [&sh] {
        bool ok = specific_heat_check(6, sh.F());
        return Outcome{ok, ok ? "c = -2u holds" : "c != -2u", "exact"};
    });
    add("largen.assemble_W", 7, [] {
        TSeries want(6);
        want.add_term(Monomial::var({0}, 3), KPoly(rat(1, 12)));
        want.add_term(Monomial::var({0}, 3) * Monomial::var({2}), KPoly(rat(1, 24)));
        TSeries r = assemble_W(6).remainder;
        return Outcome{r == want, std::to_string(r.size()) + " terms, " + (r == want ? "equal" : "differ"), "exact"};
    });

    // 8
    add("largen.rh_residuals", 8, [&opt] {
        std::mt19937 rng(opt.seed);
        std::uniform_int_distribution<int> size(3, 8);
        std::uniform_real_distribution<double> lam(2.0, 12.0);
        double worst = 0;
        int evals = 0;
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> ls(size(rng));
            for (auto& l : ls) l = lam(rng);
            double top = *std::max_element(ls.begin(), ls.end());
            for (double kr : {0.0, 0.05, 0.1}) {
                SpectrumSample s{ls, kr};
                SaddleState st = numeric_c(s);
                for (double x : geometric_grid(1.2 * top, 40 * top, 20)) {
                    worst = std::max(worst, std::abs(cubic_residual(x, s, st)));
                    ++evals;
                }
            }
        }
        return Outcome{worst <= 1e-8, sci(worst) + " over " + std::to_string(evals) + " points", "1e-8"};
    });
    add("largen.single_eigenvalue", 8, [] {
        double c = numeric_c({{4.0}, 0.0}).c;
        // independent bisection of c + (4 + c)^{-1/2} = 0 on the branch through c ~ -t0
        double lo = -2, hi = 0;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            (mid + 1 / std::sqrt(4 + mid) < 0 ? lo : hi) = mid;
        }
        double oracle = 0.5 * (lo + hi);
        bool ok = std::abs(c - oracle) <= 1e-5 && std::abs(c + 0.537402) <= 1e-5;
        return Outcome{ok, "c " + num(c) + ", bisection " + num(oracle), "1e-5 from -0.537402"};
    });
    add("largen.series_vs_numeric", 0, [] {
        SpectrumSample s{{100, 121, 144}, 0.0};
        double c = numeric_c(s).c;
        double ser = eval_normalized(c_series(9), s);
        double bound = 1.5 * std::abs(eval_normalized(c_series(12).homogeneous(13), s));
        double d = std::abs(c - ser);
        return Outcome{d <= bound, sci(d), "first dropped term " + sci(bound)};
    });

    // 9
    add("virasoro.commutators", 9, [] {
        int bad = 0;
        for (int n = -1; n <= 2; ++n)
            for (int m = -1; m <= 2; ++m)
                if (!commutator_check(n, m, 4)) ++bad;
        return Outcome{bad == 0, std::to_string(16 - bad) + "/16 pairs close", "exact"};
    });
    add("virasoro.stabilization", 9, [&sh] {
        DeriveOptions o;
        o.max_w2 = 9;
        auto next = derive_tower({1, 2, 3}, 6, o);
        const auto& base = sh.tower();
        std::string msg;
        bool ok = true;
        for (int i = 0; i < 3; ++i) {
            auto r = compare_constraints(base[i], next[i]);
            ok = ok && r.stable;
            msg += (i ? ", " : "") + std::string("m=") + std::to_string(i + 1) + (r.stable ? " stable" : " changed");
        }
        return Outcome{ok, msg + " (P=5 vs 6)", "exact"};
    });

    // 10
    for (int p : {2, 3}) {
        add("eigencalc.gamma" + std::to_string(p) + "_vs_fd", 10, [p, &opt] {
            std::mt19937 rng(opt.seed * 31 + p);
            auto ex = trace_function([](int, double x) { return std::exp(x); });
            MatrixFn F = [](const CMatrix& X) { return CMatrix(X.exp()).trace(); };
            double worst = 0;
            for (int n : {3, 4}) {
                auto gam = gamma_all(p, n);
                for (int trial = 0; trial < 10; ++trial) {
                    CMatrix L = random_hermitian(n, rng, 0.1);
                    double err = 0, scale = 0;
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b) {
                            auto sp = spectral_derivative(gam, ex, L, a, b);
                            auto fd = matrix_derivative_fd(F, L, p, a, b).value;
                            err = std::max(err, std::abs(sp - fd));
                            scale = std::max(scale, std::abs(sp));
                        }
                    worst = std::max(worst, err / scale);
                }
            }
            return Outcome{worst <= 1e-5, sci(worst) + " over 20 trials", "1e-5 relative"};
        });
    }
    add("eigencalc.canonical_forms", 0, [] {
        bool ok = true;
        for (int P : {3, 4}) {
            EigOperator g3 = gamma(3, P);
            ok = ok && gamma_alt_order(3, P) == g3 && gamma3_display(P, 0, false) == g3;
        }
        return Outcome{ok, ok ? "recursion orders and closed display agree" : "forms differ", "exact"};
    });

    // 11
    auto grid = geometric_grid(8, 64, 7);
    for (int w2 : {3, 6}) {
        double want = w2 == 3 ? -3.0 : -4.5;
        add("oracles.slope_W" + half_str(w2), 11, [grid, w2, want, &sh] {
            TSeries Ft = sh.F().truncated(w2);
            std::string msg;
            bool ok = true;
            for (int k = 0; k <= 2; ++k) {
                auto r = asymptotic_residual_scan(grid, k, Ft);
                bool e = !r.saturated && std::abs(r.slope / want - 1) <= 0.1;
                ok = ok && e;
                msg += (k ? ", " : "") + std::string("k=") + std::to_string(k) + " " +
                       (r.saturated ? std::string("saturated") : num(r.slope));
            }
            return Outcome{ok, msg, "10% of " + num(want)};
        });
    }
    add("oracles.leading_5_48", 11, [] {
        double v = leading_coefficient_extraction(32, 64);
        double rel = std::abs(v / (5.0 / 48) - 1);
        return Outcome{rel <= 0.02, num(v) + " (" + sci(rel) + " relative)", "2% of 5/48"};
    });
    add("oracles.node_doubling", 0, [] {
        double worst = 0;
        for (double l : {4.0, 8.0, 16.0, 32.0, 64.0})
            for (int k = 0; k <= 4; ++k)
                worst = std::max(worst, std::abs(std::expm1(airy_log_scaled(l, k, 11) - airy_log_scaled(l, k, 10))));
        return Outcome{worst < 1e-10, sci(worst), "1e-10 relative"};
    });
    add("oracles.derivative_identity", 0, [] {
        double worst = 0;
        for (double l : {4.0, 16.0, 64.0})
            for (int k = 1; k <= 4; ++k) {
                // Richardson-extrapolated central difference
                double h = 1e-3 * std::sqrt(l);
                auto cd = [&](double hh) { return (airy_Z(l + hh, k - 1) - airy_Z(l - hh, k - 1)) / (2 * hh); };
                double d = (4 * cd(h / 2) - cd(h)) / 3;
                worst = std::max(worst, std::abs(d / airy_Z(l, k) - 1));
            }
        return Outcome{worst <= 1e-6, sci(worst), "1e-6 relative"};
    });
    add("oracles.zscale_invariance", 0, [grid, &sh] {
        TSeries Ft = sh.F().truncated(6);
        auto a = asymptotic_residual_scan(grid, 1, Ft), b = asymptotic_residual_scan(grid, 1, Ft, 7.5);
        double worst = 0;
        for (size_t i = 0; i < a.differences.size(); ++i)
            worst = std::max(worst, std::abs(a.differences[i] - b.differences[i]));
        return Outcome{worst <= 1e-12, sci(worst), "1e-12"};
    });

    add("series.json_roundtrip", 0, [&sh] {
        bool ok = TSeries::from_json(sh.F().to_json()) == sh.F();
        return Outcome{ok, ok ? "lossless" : "changed", "exact"};
    });
    return cs;
}

}  // namespace

std::vector<CheckResult> run_suite(const SuiteOptions& opt) {
    Shared sh;
    auto checks = build(opt, sh);
    if (opt.criteria_only) std::erase_if(checks, [](const Check& c) { return c.criterion == 0; });
    // criterion order so the shared free energy is charged to the first criterion
    std::stable_sort(checks.begin(), checks.end(), [](const Check& a, const Check& b) {
        auto key = [](const Check& c) { return c.criterion == 0 ? 100 : c.criterion; };
        return key(a) < key(b);
    });
    std::vector<CheckResult> out(checks.size());
    auto body = [&](size_t i) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = checks[i].run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what(), "-"};
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out[i] = {checks[i].name, checks[i].criterion, o.pass, o.measured, o.tolerance, s};
    };
    if (opt.parallel) {
        parallel_for(checks.size(), body);
    } else {
        for (size_t i = 0; i < checks.size(); ++i) body(i);
    }
    std::sort(out.begin(), out.end(), [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    return out;
}

std::string check_json_line(const CheckResult& r) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["status"] = r.pass ? "pass" : "fail";
    j["measured"] = r.measured;
    j["tolerance"] = r.tolerance;
    return j.dump();
}

}  // namespace kp
