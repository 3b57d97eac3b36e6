#include "fjko/mobility.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace fjko {

namespace {

constexpr double kQuadTol = 1e-12;

template <typename F>
double adaptive_integral(F f, double a, double b) {
    if (a == b) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 12, kQuadTol);
}

void check_z(double z) {
    if (!(z >= 0.0)) throw std::invalid_argument("mobility: z must be nonnegative");
}

}  // namespace

MobilitySpec MobilitySpec::porous_beta(double beta, double delta) {
    if (!(beta > 0.0 && beta <= 1.0))
        throw std::invalid_argument("MobilitySpec: beta must lie in (0, 1] (concave nondecreasing)");
    if (!(delta >= 0.0)) throw std::invalid_argument("MobilitySpec: delta must be nonnegative");
    return MobilitySpec(MobilityKind::PorousBeta, beta, delta);
}

MobilitySpec MobilitySpec::exponent_one(double eps) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("MobilitySpec: eps must lie in (0, 1] (concave nondecreasing)");
    return MobilitySpec(MobilityKind::ExponentOne, eps, 0.0);
}

MobilitySpec MobilitySpec::constant(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("MobilitySpec: c must be positive");
    return MobilitySpec(MobilityKind::Constant, c, 0.0);
}

MobilitySpec MobilitySpec::for_porous_equation(double beta, double alpha, double tau) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("mobility: alpha must lie in (0,1)");
    if (!(tau > 0.0)) throw std::invalid_argument("mobility: tau must be positive");
    return porous_beta(beta, std::pow(tau, alpha / (4.0 * (2.0 - beta))));
}

MobilitySpec MobilitySpec::for_linear_equation(double alpha, double tau) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("mobility: alpha must lie in (0,1)");
    if (!(tau > 0.0 && tau <= 1.0))
        throw std::invalid_argument("mobility: the linear-equation weight needs tau in (0, 1]");
    return exponent_one(std::pow(tau, 1.0 - alpha / 4.0));
}

double MobilitySpec::operator()(double z) const {
    check_z(z);
    switch (kind_) {
        case MobilityKind::PorousBeta: return std::pow(z + p2_, p1_);
        case MobilityKind::ExponentOne: return std::pow(z + 1.0, p1_);
        case MobilityKind::Constant: return p1_;
    }
    return 0.0;
}

double MobilitySpec::derivative(double z) const {
    check_z(z);
    switch (kind_) {
        case MobilityKind::PorousBeta:
            if (p1_ == 1.0) return 1.0;
            return p1_ * std::pow(z + p2_, p1_ - 1.0);
        case MobilityKind::ExponentOne: return p1_ * std::pow(z + 1.0, p1_ - 1.0);
        case MobilityKind::Constant: return 0.0;
    }
    return 0.0;
}

double MobilitySpec::inf_value() const {
    switch (kind_) {
        case MobilityKind::PorousBeta: return std::pow(p2_, p1_);
        case MobilityKind::ExponentOne: return 1.0;
        case MobilityKind::Constant: return p1_;
    }
    return 0.0;
}

double MobilitySpec::integral_u(double z) const {
    check_z(z);
    switch (kind_) {
        case MobilityKind::Constant:
            return z * z / (2.0 * p1_);
        case MobilityKind::PorousBeta: {
            const double beta = p1_, delta = p2_;
            if (beta == 1.0) {
                if (!(delta > 0.0))
                    throw std::invalid_argument("integral_u: undefined at delta = 0 for beta = 1");
                return (z + delta) * std::log((z + delta) / delta) - z;
            }
            const double a = 1.0 - beta, b = 2.0 - beta;
            return (std::pow(z + delta, b) - std::pow(delta, b)) / (a * b) -
                   std::pow(delta, a) * z / a;
        }
        case MobilityKind::ExponentOne: {
            const double eps = p1_;
            if (eps == 1.0) return (z + 1.0) * std::log(z + 1.0) - z;
            const double a = 1.0 - eps, b = 2.0 - eps;
            return (std::pow(z + 1.0, b) - 1.0) / (a * b) - z / a;
        }
    }
    return 0.0;
}

double u_functional(const MobilitySpec& spec, const Density& u) {
    double acc = 0.0;
    for (double x : u.values) acc += spec.integral_u(std::max(x, 0.0));
    return acc * u.grid.cell_volume();
}

double g_p(const Density& u, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("g_p: p must be >= 1");
    double acc = 0.0;
    for (double x : u.values) acc += std::pow(std::abs(x), p);
    return acc * u.grid.cell_volume();
}

double big_g(const MobilitySpec& spec, double p, double z) {
    check_z(z);
    if (!(p > 1.0)) throw std::invalid_argument("big_g: p must be > 1");
    if (z == 0.0) return 0.0;
    // t = u^{1/(p-1)} turns the t^{p-2} factor into a constant Jacobian
    const double q = 1.0 / (p - 1.0);
    return p * adaptive_integral([&](double u) { return spec(std::pow(u, q)); }, 0.0,
                                 std::pow(z, p - 1.0));
}

double script_g(const MobilitySpec& spec, double p, double z) {
    check_z(z);
    if (!(p > 1.0)) throw std::invalid_argument("script_g: p must be > 1");
    if (z == 0.0) return 0.0;
    // t = u^{2/p}: sqrt(g'') t^{(p-2)/2} dt = sqrt(p(p-1)) (2/p) du
    const double q = 2.0 / p;
    const double front = std::sqrt(p * (p - 1.0)) * q;
    return front * adaptive_integral([&](double u) { return std::sqrt(spec(std::pow(u, q))); }, 0.0,
                                     std::pow(z, p / 2.0));
}

Field script_g_field(const MobilitySpec& spec, double p, const Field& u) {
    Field out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = script_g(spec, p, std::max(u[i], 0.0));
    return out;
}

}  // namespace fjko
