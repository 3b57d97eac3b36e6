#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fjko/caputo.hpp"
#include "fjko/gamma.hpp"
#include "fjko/rng.hpp"
#include "fjko/verify.hpp"

using namespace fjko;

TEST_CASE("gamma function matches the standard library on (0,2)") {
    for (double z = 0.05; z < 1.999; z += 0.01)
        CHECK(std::abs(gamma_fn(z) - std::tgamma(z)) <= 1e-13 * std::abs(std::tgamma(z)));
    CHECK(gamma_fn(1.5) == doctest::Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(c_alpha(0.5) == doctest::Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK_THROWS(gamma_fn(0.0));
}

TEST_CASE("l1 weights: first step and closed-form k=2") {
    const L1Weights w1 = l1_weights(1, 0.37);
    CHECK(w1.b[0] == 1.0);
    CHECK(w1.b[1] == doctest::Approx(-1.0).epsilon(1e-15));

    const L1Weights w2 = l1_weights(2, 0.5);
    CHECK(w2.b[0] == 1.0);
    CHECK(w2.b[1] == doctest::Approx(std::sqrt(2.0) - 2.0).epsilon(1e-14));   // -0.5857864376
    CHECK(w2.b[2] == doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-14));   // -0.4142135624
    CHECK(-w2.b[2] - w2.b[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(w2.c_alpha == doctest::Approx(1.0 / gamma_fn(1.5)).epsilon(1e-15));

    CHECK_THROWS(l1_weights(0, 0.5));
    CHECK_THROWS(l1_weights(3, 0.0));
    CHECK_THROWS(l1_weights(3, 1.0));
}

TEST_CASE("l1 weights: sign pattern and sum identities") {
    for (double alpha : {0.3, 0.5, 0.8}) {
        for (int k = 1; k <= 64; ++k) {
            const L1Weights w = l1_weights(k, alpha);
            CHECK(w.b[0] == 1.0);
            double conv = 0.0;
            for (int i = 1; i <= k; ++i) {
                CHECK(w.b[i] <= 0.0);
                conv += -w.b[i];
            }
            CHECK(std::abs(conv - 1.0) <= 1e-12);
        }
        for (int k : {1, 2, 3, 10, 64})
            CHECK(std::abs(weight_sum_identity(k, alpha) - std::pow(k, 1.0 - alpha)) <= 1e-12);
    }
    CHECK(weight_sum_identity(1, 0.77) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(weight_sum_identity(3, 0.5) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));  // 1.7320508
    CHECK(weight_sum_identity(10, 0.3) == doctest::Approx(std::pow(10.0, 0.7)).epsilon(1e-14));  // 5.0118723
}

TEST_CASE("history combination: identity, fixed point, convex bounds, mass") {
    const Grid grid(1, 32, 10.0);
    SplitMix64 rng(7);
    const Density a = random_smooth_density(grid, rng);
    const Density b = random_smooth_density(grid, rng);
    const Density c = random_smooth_density(grid, rng);

    // k = 1: ubar^0 = u^0 exactly
    const Density ub1 = history_combination(History(0.1, {a}), l1_weights(1, 0.4));
    for (std::size_t i = 0; i < ub1.values.size(); ++i)
        CHECK(ub1.values[i] == doctest::Approx(a.values[i]).epsilon(1e-14));

    // equal inputs are a fixed point of the convex combination
    const Density ub2 = history_combination(History(0.1, {a, a}), l1_weights(2, 0.5));
    for (std::size_t i = 0; i < ub2.values.size(); ++i)
        CHECK(ub2.values[i] == doctest::Approx(a.values[i]).epsilon(1e-12));

    // pointwise min <= ubar <= pointwise max, unit mass
    const Density ub3 = history_combination(History(0.1, {a, b, c}), l1_weights(3, 0.5));
    for (std::size_t i = 0; i < ub3.values.size(); ++i) {
        const double lo = std::min({a.values[i], b.values[i], c.values[i]});
        const double hi = std::max({a.values[i], b.values[i], c.values[i]});
        CHECK(ub3.values[i] >= lo - 1e-12);
        CHECK(ub3.values[i] <= hi + 1e-12);
    }
    CHECK(std::abs(ub3.mass() - 1.0) <= 1e-12);

    CHECK_THROWS(history_combination(History(0.1, {a, b}), l1_weights(3, 0.5)));
}

TEST_CASE("caputo_left: constants, exactness on t, rate on t^2") {
    const double alpha = 0.5;

    std::vector<double> ones(17, 1.0);
    for (double v : caputo_left(ones, alpha, 0.25)) CHECK(std::abs(v) <= 1e-12);

    // f(t) = t is reproduced exactly by the piecewise-linear quadrature:
    // d^0.5 t = Gamma(2)/Gamma(1.5) sqrt(t) = 2/sqrt(pi) at t = 1
    const int N = 16;
    const double tau = 1.0 / N;
    std::vector<double> lin(N + 1);
    for (int i = 0; i <= N; ++i) lin[i] = i * tau;
    const std::vector<double> dl = caputo_left(lin, alpha, tau);
    CHECK(dl[N] == doctest::Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-12));  // 1.1283792

    // f(t) = t^2: error at t = 1 vs Gamma(3)/Gamma(3-alpha) decays with order >= 1
    for (double a : {0.3, 0.5, 0.8}) {
        const double exact = gamma_fn(3.0) / gamma_fn(3.0 - a);
        std::vector<double> errs;
        for (int n : {16, 32, 64}) {
            const double h = 1.0 / n;
            std::vector<double> f(n + 1);
            for (int i = 0; i <= n; ++i) f[i] = (i * h) * (i * h);
            errs.push_back(std::abs(caputo_left(f, a, h).back() - exact));
        }
        CHECK(std::log2(errs[0] / errs[1]) >= 1.0);
        CHECK(std::log2(errs[1] / errs[2]) >= 1.0);
    }
}

TEST_CASE("caputo_right: constants, linear exactness, quadrature route agreement") {
    const double alpha = 0.5, T = 2.0;
    const int N = 32;
    const double tau = T / N;

    std::vector<double> ones(N + 1, 1.0);
    const RightCaputoSeries rc1 = caputo_right(ones, alpha, tau, T);
    for (int k = 0; k <= N; ++k) {
        CHECK(std::abs(rc1.surrogate[k]) <= 1e-12);
        CHECK(std::abs(rc1.quadrature[k]) <= 1e-12);
    }

    // phi(t) = T - t: both routes equal (T-t)^{1-alpha}/Gamma(2-alpha) exactly
    std::vector<double> lin(N + 1);
    for (int i = 0; i <= N; ++i) lin[i] = T - i * tau;
    const RightCaputoSeries rc2 = caputo_right(lin, alpha, tau, T);
    for (int k = 0; k < N; ++k) {
        const double t = k * tau;
        const double exact = std::pow(T - t, 1.0 - alpha) / gamma_fn(2.0 - alpha);
        CHECK(rc2.surrogate[k] == doctest::Approx(exact).epsilon(1e-12));
        CHECK(rc2.quadrature[k] == doctest::Approx(rc2.surrogate[k]).epsilon(1e-12));
    }
}

TEST_CASE("caputo_right: Richardson order on (T-t)^2 lies in [1.3, 1.7]") {
    const double alpha = 0.5, T = 1.0;
    auto error_at_half = [&](int N) {
        const double tau = T / N;
        std::vector<double> f(N + 1);
        for (int i = 0; i <= N; ++i) f[i] = (T - i * tau) * (T - i * tau);
        const RightCaputoSeries rc = caputo_right(f, alpha, tau, T);
        const int k = N / 2;
        // exact right derivative of (T-t)^2 = T^2 psi with psi = (1-t/T)^2
        const double exact = T * T * right_caputo_poly(2, alpha, T, k * tau);
        return std::abs(rc.surrogate[k] - exact);
    };
    const double order = std::log2(error_at_half(64) / error_at_half(128));
    CHECK(order >= 1.3);
    CHECK(order <= 1.7);
}

TEST_CASE("summation by parts: the two pairing sides agree for any quadrature") {
    SplitMix64 rng(42);
    for (double alpha : {0.3, 0.5, 0.8}) {
        for (int N : {4, 17, 32}) {
            const double T = 1.5, tau = T / N;
            std::vector<double> u(N + 1);
            for (double& x : u) x = rng.uniform(-2.0, 2.0);

            // midpoint-rule interval weights for psi(t) = (1 - t/T)^2
            std::vector<double> w(N);
            for (int k = 1; k <= N; ++k) {
                const double tm = (k - 0.5) * tau;
                w[k - 1] = tau * (1.0 - tm / T) * (1.0 - tm / T);
            }
            const double lhs = history_pairing_lhs(u, alpha, w);
            const double rhs = history_pairing_rhs(u, alpha, w);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));

            // arbitrary weights, the identity is algebraic
            for (double& x : w) x = rng.uniform(-1.0, 1.0);
            const double lhs2 = history_pairing_lhs(u, alpha, w);
            const double rhs2 = history_pairing_rhs(u, alpha, w);
            CHECK(std::abs(lhs2 - rhs2) <= 1e-12 * std::max(1.0, std::abs(lhs2)));
        }
    }
}
