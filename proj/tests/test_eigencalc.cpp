#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "kp/eigencalc.hpp"

using namespace kp;

namespace {

CMatrix hermitian(int n, std::mt19937& rng) {
    std::normal_distribution<double> N(0, 1);
    for (;;) {
        CMatrix A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = {N(rng), N(rng)};
        CMatrix H = (A + A.adjoint()) * 0.5;
        Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
        auto ev = es.eigenvalues();
        bool ok = true;
        for (int i = 0; i + 1 < n; ++i) ok = ok && ev(i + 1) - ev(i) >= 0.1;
        if (ok) return H;
    }
}

}  // namespace

TEST_CASE("first and second order operators") {
    EigOperator g1 = gamma(1, 3, 0);
    EigOperator d0 = EigOperator::d(3, 0);
    CHECK(g1 == d0);
    EigOperator g2 = gamma(2, 2, 0);
    EigOperator want(2);
    want.add(1, {}, {0, 0});
    want.add(1, {{0, 1}}, {0});
    want.add(-1, {{0, 1}}, {1});
    CHECK(g2 == want);
}

TEST_CASE("canonical rewrite and recursion order") {
    EigOperator op(3);
    op.add(1, {{0, 2}, {1, 2}}, {});
    EigOperator c = op.canonical();
    EigOperator want(3);
    want.add(1, {{0, 1}, {1, 2}}, {});
    want.add(-1, {{0, 1}, {0, 2}}, {});
    CHECK(c == want.canonical());
    for (int P : {3, 4}) {
        CHECK(gamma_alt_order(3, P) == gamma(3, P));
        CHECK(gamma3_display(P, 0, false) == gamma(3, P));
        CHECK_FALSE(gamma3_display(P, 0, true) == gamma(3, P));
    }
    CHECK(gamma_alt_order(4, 3) == gamma(4, 3));
}

TEST_CASE("operators on trace functions") {
    auto sq = trace_function([](int o, double x) { return o == 0 ? x * x : o == 1 ? 2 * x : o == 2 ? 2.0 : 0.0; });
    // d^2/dLambda^2 tr Lambda^2 has diagonal entries 2 + sum_{d != c} 2 (l_c - l_d)/(l_c - l_d)
    CHECK(apply_eig(gamma(2, 2), sq, {1.0, 2.0}) == doctest::Approx(4.0));
    auto ex = trace_function([](int, double x) { return std::exp(x); });
    CHECK(apply_eig(gamma(1, 3), ex, {0.1, 0.5, 1.0}) == doctest::Approx(std::exp(0.1)));
}

TEST_CASE("spectral reconstruction against finite differences") {
    std::mt19937 rng(11);
    MatrixFn F = [](const CMatrix& X) { return CMatrix(X.exp()).trace(); };
    auto ex = trace_function([](int, double x) { return std::exp(x); });
    for (int n : {3, 4})
        for (int p : {1, 2, 3}) {
            auto gam = gamma_all(p, n);
            for (int trial = 0; trial < 3; ++trial) {
                CMatrix L = hermitian(n, rng);
                double err = 0, scale = 0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) {
                        auto fd = matrix_derivative_fd(F, L, p, a, b);
                        CHECK_FALSE(fd.ill_conditioned);
                        auto sp = spectral_derivative(gam, ex, L, a, b);
                        err = std::max(err, std::abs(fd.value - sp));
                        scale = std::max(scale, std::abs(sp));
                    }
                CAPTURE(n);
                CAPTURE(p);
                CHECK(err / scale < 1e-5);
            }
        }
}

TEST_CASE("near-degenerate input is flagged") {
    CMatrix L = CMatrix::Zero(3, 3);
    L(0, 0) = 1;
    L(1, 1) = 1.01;
    L(2, 2) = 3;
    MatrixFn F = [](const CMatrix& X) { return (X * X * X).trace(); };
    CHECK(matrix_derivative_fd(F, L, 2, 0, 0).ill_conditioned);
}
