#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fjko/caputo.hpp"
#include "fjko/grid.hpp"
#include "fjko/mobility.hpp"
#include "fjko/transport.hpp"

namespace fjko {

struct TransportParams {
    int M = 16;
    double tol = 1e-7;
    int max_iter = 20000;
};

/// Everything needed to reproduce a run. The mobility is derived from
/// (equation, beta, alpha, tau): (z + tau^{alpha/(4(2-beta))})^beta for the
/// nonlinear equation, (z + 1)^{tau^{1-alpha/4}} for the linear one.
struct RunConfig {
    double alpha = 0.5;
    bool linear = false;
    double beta = 1.0;
    double s = 0.25;
    int d = 1;
    int n = 64;
    double length = 10.0;
    double tau = 0.05;
    double T = 0.5;
    TransportParams transport;
    std::string solver = "jko";  // jko | reference
    std::uint64_t seed = 0;

    void validate() const;
    int steps() const;  // N = T/tau
    Grid make_grid() const { return Grid(d, n, length); }
    MobilitySpec mobility() const;
};

struct StepDiagnostics {
    int step = 0;
    double time = 0.0;
    double w2m = 0.0;         // squared transport cost of the step
    double energy_hms = 0.0;  // 1/2 |u|^2 in H^{-s}
    double energy_h1ms = 0.0; // |u|^2 in H^{1-s}
    double lp1 = 0.0, lp2 = 0.0, lp4 = 0.0, lpinf = 0.0;
    double mass = 0.0;  // endpoint mass before renormalization
    bool converged = true;
    double wall_ms = 0.0;
};

struct Trajectory {
    RunConfig config;
    std::vector<Density> states;               // u^0 .. u^N
    std::vector<StepDiagnostics> diagnostics;  // one entry per state

    bool all_converged() const;
};

/// Outer loop of the scheme: per step, L1 weights -> history combination ->
/// one jko_step, with diagnostics. Aborts on mass drift beyond 1e-6 or when a
/// step ends worse than the trivial candidate u = ubar.
Trajectory run(const RunConfig& config, const Density& u0);

/// Piecewise-constant interpolant: u^k for (k-1) tau < t <= k tau, u^0 at 0.
const Density& interpolate(const Trajectory& traj, double t);

}  // namespace fjko
