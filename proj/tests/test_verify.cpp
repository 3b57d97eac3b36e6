#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fjko/gamma.hpp"
#include "fjko/reference.hpp"
#include "fjko/rng.hpp"
#include "fjko/spectral.hpp"
#include "fjko/verify.hpp"

using namespace fjko;

namespace {

// independent oracle for the right-sided Caputo derivative of psi = (1-t/T)^m:
// fine panels with the kernel integrated in closed form against piecewise
// linear psi'
double right_caputo_by_panels(int m, double alpha, double T, double t) {
    const int P = 200000;
    const double h = (T - t) / P;
    double acc = 0.0;
    auto dpsi = [&](double s) { return -m / T * std::pow(1.0 - s / T, m - 1.0); };
    for (int i = 0; i < P; ++i) {
        const double a = t + i * h, b = a + h;
        const double kernel =
            (std::pow(b - t, 1.0 - alpha) - std::pow(a - t, 1.0 - alpha)) / (1.0 - alpha);
        acc += dpsi(0.5 * (a + b)) * kernel;
    }
    return -acc / gamma_fn(1.0 - alpha);
}

Trajectory constant_trajectory(const RunConfig& cfg, const Density& u) {
    Trajectory traj;
    traj.config = cfg;
    for (int k = 0; k <= cfg.steps(); ++k) {
        traj.states.push_back(u);
        StepDiagnostics d;
        d.step = k;
        d.time = k * cfg.tau;
        d.mass = 1.0;
        traj.diagnostics.push_back(d);
    }
    return traj;
}

}  // namespace

TEST_CASE("polynomial right-Caputo closed forms match panel quadrature") {
    for (int m : {1, 2, 3}) {
        for (double alpha : {0.3, 0.5, 0.8}) {
            for (double t : {0.0, 0.4, 1.1}) {
                const double T = 1.5;
                CHECK(right_caputo_poly(m, alpha, T, t) ==
                      doctest::Approx(right_caputo_by_panels(m, alpha, T, t)).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("time integrals: interval pieces sum to the gamma-term factor") {
    // integral over [0,T] of the right Caputo of psi equals the singular
    // gamma term when psi(T) = 0; the two closed forms must cancel exactly
    for (int m : {1, 2, 3}) {
        for (double alpha : {0.3, 0.5, 0.8}) {
            const double T = 0.5;
            const int N = 10;
            double acc = 0.0;
            for (int k = 1; k <= N; ++k)
                acc += right_caputo_poly_interval(m, alpha, T, (k - 1) * T / N, k * T / N);
            CHECK(acc == doctest::Approx(gamma_term_time_factor(m, alpha, T)).epsilon(1e-14));
        }
    }
    // and the psi intervals telescope to the full integral T/(m+1)
    for (int m : {1, 2, 3}) {
        double acc = 0.0;
        for (int k = 1; k <= 7; ++k) acc += poly_interval(m, 0.7, (k - 1) * 0.1, k * 0.1);
        CHECK(acc == doctest::Approx(0.7 / (m + 1.0)).epsilon(1e-14));
    }
}

TEST_CASE("weak residual of a stationary uniform state is pure cancellation") {
    RunConfig cfg;
    cfg.alpha = 0.5;
    cfg.beta = 1.0;
    cfg.s = 0.25;
    cfg.d = 1;
    cfg.n = 64;
    cfg.length = 10.0;
    cfg.tau = 0.05;
    cfg.T = 0.5;
    const Grid g = cfg.make_grid();
    const Density uniform(g, Field(g.size(), 0.1));
    const Trajectory traj = constant_trajectory(cfg, uniform);
    const Field phi = bump_field(g, {5.0}, 1.5);
    for (int m : {1, 2, 3})
        CHECK(weak_residual(traj, phi, m, EquationForm::Nonlinear) <= 1e-6);
}

TEST_CASE("weak form is linear in the spatial test function") {
    RunConfig cfg;
    cfg.alpha = 0.4;
    cfg.linear = true;
    cfg.s = 0.3;
    cfg.d = 1;
    cfg.n = 32;
    cfg.length = 2.0 * std::numbers::pi;
    cfg.tau = 0.05;
    cfg.T = 0.25;
    cfg.solver = "reference";
    const Grid g = cfg.make_grid();
    const Trajectory traj = run_reference(cfg, bump_density(g, 0.1));

    const Field phi1 = bump_field(g, {2.0}, 1.2);
    const Field phi2 = bump_field(g, {4.5}, 0.9);
    Field combo(g.size());
    for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = 2.0 * phi1[i] - 0.5 * phi2[i];
    const double lhs = weak_form_signed(traj, combo, 2, EquationForm::Linear);
    const double rhs = 2.0 * weak_form_signed(traj, phi1, 2, EquationForm::Linear) -
                       0.5 * weak_form_signed(traj, phi2, 2, EquationForm::Linear);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("weak residual of the linear reference decays under tau refinement") {
    auto residual_for = [](int N) {
        RunConfig cfg;
        cfg.alpha = 0.5;
        cfg.linear = true;
        cfg.s = 0.25;
        cfg.d = 1;
        cfg.n = 32;
        cfg.length = 2.0 * std::numbers::pi;
        cfg.T = 0.5;
        cfg.tau = cfg.T / N;
        cfg.solver = "reference";
        const Grid g = cfg.make_grid();
        const Trajectory traj = run_reference(cfg, bump_density(g, 0.12));
        const Field phi = bump_field(g, {0.5 * g.length}, 1.0);
        return weak_residual(traj, phi, 2, EquationForm::Linear);
    };
    const double r8 = residual_for(8), r16 = residual_for(16), r32 = residual_for(32);
    CHECK(r16 < r8);
    CHECK(r32 < r16);
}

TEST_CASE("sobolev_conjugate and the regularity exponents") {
    CHECK(sobolev_conjugate(2, 0.5) == doctest::Approx(4.0));
    CHECK(std::isinf(sobolev_conjugate(1, 0.75)));

    // the worked case d=2, s=0.5, beta=1, p=2, q=1 gives eta = (5, 2)
    const RegularityExponents e = lp_regularity_exponents(1.0, 2.0, 1.0, 0.5, 2);
    CHECK(e.eta1 == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(e.eta2 == doctest::Approx(2.0).epsilon(1e-12));

    // collapse case: theta exponents with beta_eff = 1 coincide with eta
    const RegularityExponents t = lp_regularity_exponents(1.0, 2.0, 1.0, 0.5, 2);
    CHECK(t.eta2 == doctest::Approx(2.0).epsilon(1e-12));

    // closed formula check on classical pairs:
    // eta1 = ((b+p)/q - 1 + 2(1-s)/d)/(1/q - 1/p), eta2 = (b/p + 2(1-s)/d)/(1/q - 1/p)
    for (double b : {0.5, 1.0}) {
        for (double s : {0.3, 0.5, 0.7}) {
            const int d = 2;
            const double p = 2.0, q = 1.0;
            const RegularityExponents got = lp_regularity_exponents(b, p, q, s, d);
            const double denom = 1.0 / q - 1.0 / p;
            CHECK(got.eta1 ==
                  doctest::Approx(((b + p) / q - 1.0 + 2.0 * (1.0 - s) / d) / denom).epsilon(1e-12));
            CHECK(got.eta2 ==
                  doctest::Approx((b / p + 2.0 * (1.0 - s) / d) / denom).epsilon(1e-12));
        }
    }
}

TEST_CASE("linear functional telescoping bound on synthetic histories") {
    const Grid g(1, 32, 10.0);
    SplitMix64 rng(99);
    const Field phi = bump_field(g, {5.0}, 2.0);  // nonnegative test weight
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Density> states;
        const int k = 4 + static_cast<int>(rng.next() % 4);
        for (int i = 0; i <= k; ++i) states.push_back(random_smooth_density(g, rng));
        for (double alpha : {0.3, 0.6, 0.9}) {
            double f0 = 0.0;
            for (std::size_t i = 0; i < phi.size(); ++i) f0 += phi[i] * states[0].values[i];
            f0 *= g.cell_volume();
            const double lhs = linear_f_telescope(states, alpha, phi);
            CHECK(lhs <= std::pow(static_cast<double>(k), 1.0 - alpha) * f0 * (1.0 + 1e-12) + 1e-12);
        }
    }
}

TEST_CASE("convergence study: linear reference is Cauchy in tau") {
    std::vector<RunConfig> members;
    for (int N : {8, 16, 32}) {
        RunConfig cfg;
        cfg.alpha = 0.5;
        cfg.linear = true;
        cfg.s = 0.25;
        cfg.d = 1;
        cfg.n = 32;
        cfg.length = 10.0;
        cfg.T = 0.4;
        cfg.tau = cfg.T / N;
        cfg.solver = "reference";
        members.push_back(cfg);
    }
    const StudyTable table = convergence_study(members);
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[1].cauchy_l1 > 0.0);
    CHECK(table.rows[2].cauchy_l1 < table.rows[1].cauchy_l1);
    REQUIRE(table.orders.size() == 1);
    MESSAGE("tau-refinement order: ", table.orders[0]);
    // the L1 stepping of the linear flow is first order at alpha = 1/2
    CHECK(table.orders[0] >= 0.7);
    CHECK(table.orders[0] <= 1.6);

    RunConfig bad = members[2];
    bad.tau = members[2].tau * 0.7;
    CHECK_THROWS(convergence_study({members[0], bad}));
}
