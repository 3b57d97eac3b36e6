#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

#include "fjko/mobility.hpp"
#include "fjko/rng.hpp"
#include "fjko/verify.hpp"

using namespace fjko;

namespace {

// independent oracle: U(z) as a nested double quadrature of 1/m
double u_by_double_quadrature(const MobilitySpec& spec, double z) {
    auto inner = [&](double y) {
        return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            [&](double t) { return 1.0 / spec(t); }, 0.0, y, 10, 1e-13);
    };
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(inner, 0.0, z, 10, 1e-13);
}

}  // namespace

TEST_CASE("m_eval on the three families") {
    CHECK(MobilitySpec::porous_beta(1.0, 0.1)(0.9) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(MobilitySpec::porous_beta(0.5, 0.01)(0.99) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(MobilitySpec::exponent_one(0.2)(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS(MobilitySpec::porous_beta(1.0, 0.1)(-0.1));
    CHECK_THROWS(MobilitySpec::porous_beta(1.5, 0.1));
    CHECK_THROWS(MobilitySpec::exponent_one(1.2));
    CHECK_THROWS(MobilitySpec::constant(0.0));
}

TEST_CASE("tau-derived weights store their offsets") {
    const double alpha = 0.5, tau = 0.05;
    const MobilitySpec porous = MobilitySpec::for_porous_equation(1.0, alpha, tau);
    CHECK(porous.param2() == doctest::Approx(std::pow(tau, alpha / 4.0)).epsilon(1e-15));
    const MobilitySpec lin = MobilitySpec::for_linear_equation(alpha, tau);
    CHECK(lin.param1() == doctest::Approx(std::pow(tau, 1.0 - alpha / 4.0)).epsilon(1e-15));
    CHECK_THROWS(MobilitySpec::for_linear_equation(alpha, 2.0));  // eps would exceed 1
}

TEST_CASE("m is nondecreasing and concave on sampled points") {
    const MobilitySpec specs[] = {MobilitySpec::porous_beta(0.6, 0.2),
                                  MobilitySpec::exponent_one(0.4), MobilitySpec::constant(2.0)};
    const double h = 0.01;
    for (const MobilitySpec& m : specs) {
        for (int i = 1; i < 1000; ++i) {
            const double z = i * h;
            CHECK(m(z + h) - m(z) >= -1e-12);
            CHECK(m(z + h) + m(z - h) - 2.0 * m(z) <= 1e-12);
        }
    }
}

TEST_CASE("integral_u closed forms match double quadrature") {
    // beta = 1: U(z) = (z+d) log((z+d)/d) - z; at z = d(e-1) it equals d
    const double delta = 0.3;
    const MobilitySpec m1 = MobilitySpec::porous_beta(1.0, delta);
    const double z_star = delta * (std::numbers::e - 1.0);
    CHECK(m1.integral_u(z_star) == doctest::Approx(delta).epsilon(1e-12));
    for (double z : {0.0, 0.1, 0.7, 2.0})
        CHECK(m1.integral_u(z) == doctest::Approx(u_by_double_quadrature(m1, z)).epsilon(1e-10));

    const MobilitySpec m2 = MobilitySpec::porous_beta(0.5, 0.2);
    for (double z : {0.05, 0.5, 1.5})
        CHECK(m2.integral_u(z) == doctest::Approx(u_by_double_quadrature(m2, z)).epsilon(1e-10));

    const MobilitySpec m3 = MobilitySpec::exponent_one(0.35);
    for (double z : {0.05, 0.5, 1.5})
        CHECK(m3.integral_u(z) == doctest::Approx(u_by_double_quadrature(m3, z)).epsilon(1e-10));

    CHECK_THROWS(MobilitySpec::porous_beta(1.0, 0.0).integral_u(1.0));
}

TEST_CASE("u_functional: uniform value, positivity, Jensen convexity") {
    const Grid g(1, 64, 10.0);
    const Field uniform(g.size(), 0.1);
    const MobilitySpec c2 = MobilitySpec::constant(2.0);
    // U(z) = z^2/(2c): integral over [0,L) of (1/L)^2/(2c) = 1/(2cL)
    CHECK(u_functional(c2, Density(g, uniform)) == doctest::Approx(1.0 / (2.0 * 2.0 * 10.0)).epsilon(1e-12));

    SplitMix64 rng(1);
    const Density a = random_smooth_density(g, rng);
    const Density b = random_smooth_density(g, rng);
    CHECK(u_functional(c2, a) > 0.0);
    for (const MobilitySpec& spec :
         {MobilitySpec::porous_beta(0.7, 0.25), MobilitySpec::exponent_one(0.5), c2}) {
        for (double lambda : {0.25, 0.5, 0.75}) {
            Field mixv(g.size());
            for (std::size_t i = 0; i < mixv.size(); ++i)
                mixv[i] = lambda * a.values[i] + (1.0 - lambda) * b.values[i];
            const Density mix(g, std::move(mixv));
            CHECK(u_functional(spec, mix) <=
                  lambda * u_functional(spec, a) + (1.0 - lambda) * u_functional(spec, b) + 1e-12);
        }
    }
}

TEST_CASE("g_p: mass, uniform p=2 value, refinement stability") {
    const Grid g(1, 64, 10.0);
    SplitMix64 rng(12);
    const Density u = random_smooth_density(g, rng);
    CHECK(g_p(u, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(g_p(Density(g, Field(g.size(), 0.1)), 2.0) == doctest::Approx(0.1).epsilon(1e-12));

    const Grid fine(1, 128, 10.0);
    CHECK(std::abs(g_p(bump_density(g, 0.3), 2.0) - g_p(bump_density(fine, 0.3), 2.0)) <= 1e-6);
}

TEST_CASE("script_g closed forms and the Hoelder bound against big_g") {
    CHECK(script_g(MobilitySpec::constant(1.0), 2.0, 0.0) == 0.0);
    for (double z : {0.25, 1.0, 3.0}) {
        CHECK(script_g(MobilitySpec::constant(1.0), 2.0, z) ==
              doctest::Approx(std::sqrt(2.0) * z).epsilon(1e-8));
        CHECK(script_g(MobilitySpec::porous_beta(1.0, 0.0), 2.0, z) ==
              doctest::Approx(2.0 * std::sqrt(2.0) / 3.0 * std::pow(z, 1.5)).epsilon(1e-8));
    }

    // power-rule lower bound for the porous weight at tau <= 1
    const MobilitySpec porous = MobilitySpec::for_porous_equation(0.8, 0.5, 0.1);
    const double beta = 0.8, p = 2.0;
    for (double z : {0.1, 0.5, 2.0})
        CHECK(script_g(porous, p, z) >=
              2.0 * std::sqrt(p * (p - 1.0)) / (beta + p) * std::pow(z, 0.5 * (beta + p)) - 1e-10);

    SplitMix64 rng(5);
    for (const MobilitySpec& spec : {MobilitySpec::porous_beta(0.5, 0.1),
                                     MobilitySpec::exponent_one(0.3), MobilitySpec::constant(2.0)}) {
        for (double p_exp : {1.5, 2.0, 3.0}) {
            for (int trial = 0; trial < 20; ++trial) {
                double a = rng.uniform(0.0, 2.0), b = rng.uniform(0.0, 2.0);
                if (a > b) std::swap(a, b);
                const double dg = script_g(spec, p_exp, b) - script_g(spec, p_exp, a);
                const double dG = big_g(spec, p_exp, b) - big_g(spec, p_exp, a);
                CHECK(dg * dg <= (b - a) * dG + 1e-10);
            }
        }
    }
}
