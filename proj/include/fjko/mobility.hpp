#pragma once

#include "fjko/grid.hpp"

namespace fjko {

enum class MobilityKind { PorousBeta, ExponentOne, Constant };

/// Weight function m of the transport action. Three families:
///   PorousBeta:  m(z) = (z + delta)^beta,   0 < beta <= 1
///   ExponentOne: m(z) = (z + 1)^eps,        0 < eps  <= 1
///   Constant:    m(z) = c,                  c > 0
/// delta and eps are stored, never recomputed, so a run's mobility is
/// immutable even if tau changes elsewhere.
class MobilitySpec {
public:
    static MobilitySpec porous_beta(double beta, double delta);
    static MobilitySpec exponent_one(double eps);
    static MobilitySpec constant(double c);

    /// delta = tau^{alpha/(4(2-beta))}, the choice that solves the nonlinear equation
    static MobilitySpec for_porous_equation(double beta, double alpha, double tau);
    /// eps = tau^{1-alpha/4}, the choice that solves the linear equation; needs tau <= 1
    static MobilitySpec for_linear_equation(double alpha, double tau);

    MobilityKind kind() const { return kind_; }
    bool is_constant_kind() const { return kind_ == MobilityKind::Constant; }

    /// first parameter: beta / eps / c
    double param1() const { return p1_; }
    /// second parameter: delta (PorousBeta only)
    double param2() const { return p2_; }

    double operator()(double z) const;  // m(z), z >= 0
    double derivative(double z) const;  // m'(z)
    double inf_value() const;           // inf m on [0, inf)

    /// U(z) with U'' = 1/m, U(0) = U'(0) = 0; closed forms (double
    /// antiderivatives of powers). Requires inf m > 0 when beta = 1.
    double integral_u(double z) const;

private:
    MobilitySpec(MobilityKind k, double a, double b) : kind_(k), p1_(a), p2_(b) {}
    MobilityKind kind_;
    double p1_, p2_;
};

/// U(u) = integral of U(u(x)) dx
double u_functional(const MobilitySpec& spec, const Density& u);

/// integral of u^p dx == lp_norm(u, p)^p
double g_p(const Density& u, double p);

/// G(z) = int_0^z m(t) g''(t) dt for g(t) = t^p, adaptive quadrature
double big_g(const MobilitySpec& spec, double p, double z);

/// script G(z) = int_0^z sqrt(m(t) g''(t)) dt for g(t) = t^p. The p < 2
/// endpoint singularity is removed analytically by the substitution t = u^{2/p}.
double script_g(const MobilitySpec& spec, double p, double z);

/// script G applied pointwise to a field
Field script_g_field(const MobilitySpec& spec, double p, const Field& u);

}  // namespace fjko
