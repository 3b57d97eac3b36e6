#pragma once

#include <array>
#include <optional>
#include <vector>

#include "fjko/grid.hpp"
#include "fjko/mobility.hpp"

namespace fjko {

/// Space-time discretization of (rho_t, nu_t) on transport time [0,1]:
/// densities at the M+1 time nodes, momenta at the M interval midpoints.
/// Spatial derivatives are spectral, so divergence and gradient are exact
/// adjoints and the continuity projection is a single symmetric solve.
struct TransportPath {
    Grid grid;
    int M = 16;
    std::vector<Field> rho;              // M+1 layers
    std::vector<std::vector<Field>> nu;  // M layers x d components
    double action = 0.0;

    static TransportPath constant(const Density& start, int M);
};

/// Discrete action: sum_j dt sum_x |nu_j|^2 / m(rho_mid) * vol, midpoint
/// densities averaged from adjacent nodes. Requires inf m > 0.
double action_value(const TransportPath& path, const MobilitySpec& spec);

/// L2-orthogonal projection onto the affine set of discrete continuity
/// solutions with rho[0] = start and, if end is non-null, rho[M] = *end.
/// Diagonalized by DFT in space; tridiagonal solves in transport time.
TransportPath project_continuity(TransportPath path, const Density& start, const Density* end);

struct ProxPoint {
    double rho = 0.0;
    std::array<double, 2> nu{0.0, 0.0};
    int iterations = 0;
};

/// Pointwise proximal map of (r,s) -> sigma |s|^2 / m(r): the unique minimizer
/// of 1/2 (r - rho_tilde)^2 + 1/2 |s - nu_tilde|^2 + sigma |s|^2/m(r) over
/// r >= 0. s is eliminated as s = nu_tilde/(1 + 2 sigma/m(r)); the remaining
/// scalar equation is solved by safeguarded Newton with bisection fallback.
ProxPoint prox_action(double rho_tilde, const std::array<double, 2>& nu_tilde, int d, double sigma,
                      const MobilitySpec& spec);

struct TransportOptions {
    int M = 16;
    double tol = 1e-7;
    int max_iter = 20000;
};

/// Splitting parameters: sigma_p = sigma_d = 0.99/|K| (power iteration),
/// over-relaxation theta = 1, so sigma_p sigma_d |K|^2 <= 1.
struct PrimalDualState {
    double sigma_p = 0.0;
    double sigma_d = 0.0;
    double theta = 1.0;
    double op_norm = 0.0;
};

struct DistanceResult {
    double w2_sq = 0.0;  // squared modified Wasserstein distance
    TransportPath path;
    bool converged = false;
    int iterations = 0;
    PrimalDualState pd;
};

/// W_m^2 between equal-mass densities by primal-dual iteration alternating
/// prox_action and project_continuity.
DistanceResult solve_distance(const Density& gamma0, const Density& gamma1,
                              const MobilitySpec& spec, const TransportOptions& opt);

struct JkoStepResult {
    Density u;
    double w2_sq = 0.0;
    double objective = 0.0;  // C_alpha/(2 tau^alpha) W^2 + 1/2 |u|_{H^{-s}}^2
    bool converged = false;
    int iterations = 0;
    double raw_mass = 0.0;      // endpoint mass before renormalization
    double clipped_mass = 0.0;  // negative mass removed from the endpoint
    TransportPath path;
};

/// One step of the minimizing-movement scheme:
///   argmin_u C_alpha/(2 tau^alpha) W_m^2(u, ubar) + 1/2 |u|_{H^{-s}}^2
/// over paths with rho[0] = ubar fixed and rho[M] free; the endpoint prox is
/// the per-mode shrinkage u_hat <- u_hat / (1 + sigma' |xi|^{-2s}).
JkoStepResult jko_step(const Density& ubar, const MobilitySpec& spec, double tau, double alpha,
                       double s, const TransportOptions& opt);

}  // namespace fjko
